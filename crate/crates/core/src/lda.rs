//! Latent Dirichlet allocation trained by collapsed Gibbs sampling.
//!
//! Queries are folded in by Gibbs sampling with the topic-word
//! distributions held fixed; documents are scored by the probability that
//! query and document draw the same topic, `Σ_k θ_q(k) θ_d(k)`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::RankedList;
use crate::textprep::TokenStream;

/// Sampler settings. `alpha = None` means `50 / k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaParams {
    pub alpha: Option<f64>,
    pub beta: f64,
    pub train_sweeps: usize,
    pub infer_sweeps: usize,
}

impl Default for LdaParams {
    fn default() -> Self {
        LdaParams {
            alpha: None,
            beta: 0.01,
            train_sweeps: 500,
            infer_sweeps: 100,
        }
    }
}

impl LdaParams {
    pub fn alpha_for(&self, k: usize) -> f64 {
        self.alpha.unwrap_or(50.0 / k as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Config(format!(
                    "lda.alpha must be positive, got {a}"
                )));
            }
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!(
                "lda.beta must be positive, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    /// Training sweeps.
    pub iterations: usize,
    pub infer_sweeps: usize,
    vocabulary: Vec<String>,
    doc_ids: Vec<String>,
    /// k × V, row-major.
    phi: Vec<f64>,
    /// D × k, row-major.
    doc_theta: Vec<f64>,
}

impl LdaModel {
    /// Assembles a model from explicit distributions. Each `phi` row has one
    /// entry per vocabulary term and each `doc_theta` row one per topic.
    pub fn from_parts(
        vocabulary: Vec<String>,
        doc_ids: Vec<String>,
        phi: Vec<Vec<f64>>,
        doc_theta: Vec<Vec<f64>>,
        params: LdaParams,
        seed: u64,
    ) -> Result<Self> {
        let k = phi.len();
        let v = vocabulary.len();
        let bad = |msg: &str| Err(Error::Config(format!("invalid LDA model: {msg}")));
        if k == 0 {
            return bad("no topics");
        }
        if phi.iter().any(|row| row.len() != v) {
            return bad("phi row length differs from vocabulary size");
        }
        if doc_theta.len() != doc_ids.len() || doc_theta.iter().any(|row| row.len() != k) {
            return bad("doc_theta shape mismatch");
        }
        let rows_ok = |rows: &[Vec<f64>]| {
            rows.iter()
                .all(|r| r.iter().all(|&p| p >= 0.0) && (r.iter().sum::<f64>() - 1.0).abs() <= 1e-9)
        };
        if !rows_ok(&phi) || !rows_ok(&doc_theta) {
            return bad("rows must be probability distributions");
        }
        if vocabulary.windows(2).any(|w| w[0] >= w[1]) {
            return bad("vocabulary must be sorted and unique");
        }
        Ok(LdaModel {
            k,
            alpha: params.alpha_for(k),
            beta: params.beta,
            seed,
            iterations: params.train_sweeps,
            infer_sweeps: params.infer_sweeps,
            vocabulary,
            doc_ids,
            phi: phi.concat(),
            doc_theta: doc_theta.concat(),
        })
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn phi_row(&self, topic: usize) -> &[f64] {
        let v = self.vocabulary.len();
        &self.phi[topic * v..(topic + 1) * v]
    }

    pub fn theta_row(&self, doc: usize) -> &[f64] {
        &self.doc_theta[doc * self.k..(doc + 1) * self.k]
    }

    fn term_index(&self, term: &str) -> Option<usize> {
        self.vocabulary
            .binary_search_by(|v| v.as_str().cmp(term))
            .ok()
    }
}

/// Trains a `k`-topic model on the given documents.
pub fn build_lda(
    doc_ids: Vec<String>,
    docs: &[TokenStream],
    k: usize,
    seed: u64,
    params: &LdaParams,
) -> Result<LdaModel> {
    assert_eq!(doc_ids.len(), docs.len(), "one token stream per document");
    if k < 1 {
        return Err(Error::Config("LDA topic count must be at least 1".into()));
    }
    params.validate()?;
    if docs.iter().all(TokenStream::is_empty) {
        return Err(Error::EmptyVocabulary);
    }

    let vocabulary: Vec<String> = docs
        .iter()
        .flat_map(|d| d.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(str::to_string)
        .collect();
    let words: Vec<Vec<u32>> = docs
        .iter()
        .map(|d| {
            d.iter()
                .map(|t| {
                    vocabulary
                        .binary_search_by(|v| v.as_str().cmp(t))
                        .expect("indexed") as u32
                })
                .collect()
        })
        .collect();

    let alpha = params.alpha_for(k);
    let beta = params.beta;
    let mut sampler = Sampler::new(&words, vocabulary.len(), k, alpha, beta, seed);
    for _ in 0..params.train_sweeps {
        sampler.sweep(&words);
    }

    let v = vocabulary.len();
    let v_beta = v as f64 * beta;
    let mut phi = vec![0.0; k * v];
    for t in 0..k {
        let denom = f64::from(sampler.n_k[t]) + v_beta;
        for w in 0..v {
            phi[t * v + w] = (f64::from(sampler.n_wk[w * k + t]) + beta) / denom;
        }
    }
    let k_alpha = k as f64 * alpha;
    let mut doc_theta = vec![0.0; docs.len() * k];
    for (d, doc) in words.iter().enumerate() {
        let denom = doc.len() as f64 + k_alpha;
        for t in 0..k {
            doc_theta[d * k + t] = (f64::from(sampler.n_dk[d * k + t]) + alpha) / denom;
        }
    }

    Ok(LdaModel {
        k,
        alpha,
        beta,
        seed,
        iterations: params.train_sweeps,
        infer_sweeps: params.infer_sweeps,
        vocabulary,
        doc_ids,
        phi,
        doc_theta,
    })
}

struct Sampler {
    k: usize,
    alpha: f64,
    beta: f64,
    v_beta: f64,
    rng: ChaCha8Rng,
    z: Vec<Vec<u32>>,
    n_dk: Vec<u32>,
    /// V × k, word-major so one word's topic counts are contiguous.
    n_wk: Vec<u32>,
    n_k: Vec<u32>,
    inv_denom: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Sampler {
    fn new(words: &[Vec<u32>], v: usize, k: usize, alpha: f64, beta: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut n_dk = vec![0u32; words.len() * k];
        let mut n_wk = vec![0u32; v * k];
        let mut n_k = vec![0u32; k];
        let z = words
            .iter()
            .enumerate()
            .map(|(d, doc)| {
                doc.iter()
                    .map(|&w| {
                        let t = rng.random_range(0..k);
                        n_dk[d * k + t] += 1;
                        n_wk[w as usize * k + t] += 1;
                        n_k[t] += 1;
                        t as u32
                    })
                    .collect()
            })
            .collect();
        let v_beta = v as f64 * beta;
        let inv_denom = n_k.iter().map(|&n| 1.0 / (f64::from(n) + v_beta)).collect();
        Sampler {
            k,
            alpha,
            beta,
            v_beta,
            rng,
            z,
            n_dk,
            n_wk,
            n_k,
            inv_denom,
            cumulative: vec![0.0; k],
        }
    }

    fn sweep(&mut self, words: &[Vec<u32>]) {
        let k = self.k;
        for (d, doc) in words.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let w = w as usize;
                let old = self.z[d][i] as usize;
                self.n_dk[d * k + old] -= 1;
                self.n_wk[w * k + old] -= 1;
                self.n_k[old] -= 1;
                self.inv_denom[old] = 1.0 / (f64::from(self.n_k[old]) + self.v_beta);

                let ndk = &self.n_dk[d * k..(d + 1) * k];
                let nwk = &self.n_wk[w * k..(w + 1) * k];
                let mut total = 0.0;
                for t in 0..k {
                    total += (f64::from(ndk[t]) + self.alpha)
                        * (f64::from(nwk[t]) + self.beta)
                        * self.inv_denom[t];
                    self.cumulative[t] = total;
                }
                let new = draw(&self.cumulative, total * self.rng.random::<f64>());

                self.z[d][i] = new as u32;
                self.n_dk[d * k + new] += 1;
                self.n_wk[w * k + new] += 1;
                self.n_k[new] += 1;
                self.inv_denom[new] = 1.0 / (f64::from(self.n_k[new]) + self.v_beta);
            }
        }
    }
}

/// First index whose cumulative weight exceeds `u`.
fn draw(cumulative: &[f64], u: f64) -> usize {
    cumulative
        .iter()
        .position(|&c| u < c)
        .unwrap_or(cumulative.len() - 1)
}

/// Topic distribution of a query, by Gibbs fold-in against the fixed
/// topic-word distributions. Counts are averaged over the second half of
/// the sweeps. An empty or fully out-of-vocabulary query gets the uniform
/// distribution.
pub fn infer_theta(query: &TokenStream, model: &LdaModel, seed: u64) -> Vec<f64> {
    let k = model.k;
    let words: Vec<usize> = query.iter().filter_map(|t| model.term_index(t)).collect();
    if words.is_empty() {
        return vec![1.0 / k as f64; k];
    }
    let v = model.vocabulary.len();
    // Per-token view of phi[·][w].
    let columns: Vec<Vec<f64>> = words
        .iter()
        .map(|&w| (0..k).map(|t| model.phi[t * v + w]).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u32; k];
    let mut z: Vec<usize> = words
        .iter()
        .map(|_| {
            let t = rng.random_range(0..k);
            counts[t] += 1;
            t
        })
        .collect();

    let sweeps = model.infer_sweeps;
    let burn_in = sweeps / 2;
    let mut accumulated = vec![0u64; k];
    let mut samples = 0u64;
    let mut cumulative = vec![0.0; k];
    for sweep in 0..sweeps {
        for (i, col) in columns.iter().enumerate() {
            counts[z[i]] -= 1;
            let mut total = 0.0;
            for t in 0..k {
                total += (f64::from(counts[t]) + model.alpha) * col[t];
                cumulative[t] = total;
            }
            let new = draw(&cumulative, total * rng.random::<f64>());
            z[i] = new;
            counts[new] += 1;
        }
        if sweep >= burn_in {
            for (a, &c) in accumulated.iter_mut().zip(&counts) {
                *a += u64::from(c);
            }
            samples += 1;
        }
    }
    if samples == 0 {
        accumulated = counts.iter().map(|&c| u64::from(c)).collect();
        samples = 1;
    }

    let denom = words.len() as f64 + k as f64 * model.alpha;
    accumulated
        .iter()
        .map(|&a| (a as f64 / samples as f64 + model.alpha) / denom)
        .collect()
}

/// `Σ_k a(k) b(k)`.
pub fn topic_overlap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scores every document against a query topic distribution.
pub fn rank_by_theta(query_theta: &[f64], model: &LdaModel) -> RankedList {
    RankedList::from_scores(
        model
            .doc_ids
            .iter()
            .enumerate()
            .map(|(d, id)| (id.as_str(), topic_overlap(query_theta, model.theta_row(d)))),
    )
}

/// Folds the query in with `seed` and ranks documents by shared-topic
/// probability.
pub fn lda_rank(query: &TokenStream, model: &LdaModel, seed: u64) -> RankedList {
    if query.is_empty() {
        return RankedList::empty();
    }
    if query.iter().all(|t| model.term_index(t).is_none()) {
        return RankedList::empty();
    }
    rank_by_theta(&infer_theta(query, model, seed), model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(words: &[&str]) -> TokenStream {
        words.iter().copied().collect()
    }

    fn toy_docs() -> (Vec<String>, Vec<TokenStream>) {
        let docs = vec![
            stream(&["server", "outage", "database", "server"]),
            stream(&["vendor", "contract", "delay"]),
            stream(&["database", "outage", "pool"]),
        ];
        ((0..3).map(|i| format!("d{i}")).collect(), docs)
    }

    fn quick() -> LdaParams {
        LdaParams {
            train_sweeps: 50,
            infer_sweeps: 20,
            ..LdaParams::default()
        }
    }

    #[test]
    fn single_topic_theta_is_exactly_one() {
        let (ids, docs) = toy_docs();
        let model = build_lda(ids, &docs, 1, 7, &quick()).unwrap();
        for d in 0..3 {
            assert_eq!(model.theta_row(d), [1.0]);
        }
        assert_eq!(infer_theta(&stream(&["server"]), &model, 3), [1.0]);
        assert_eq!(infer_theta(&stream(&[]), &model, 3), [1.0]);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (ids, docs) = toy_docs();
        let a = build_lda(ids.clone(), &docs, 3, 11, &quick()).unwrap();
        let b = build_lda(ids, &docs, 3, 11, &quick()).unwrap();
        assert_eq!(a, b);
        let q = stream(&["outage", "database"]);
        assert_eq!(infer_theta(&q, &a, 5), infer_theta(&q, &b, 5));
    }

    #[test]
    fn empty_query_is_uniform() {
        let (ids, docs) = toy_docs();
        let model = build_lda(ids, &docs, 4, 1, &quick()).unwrap();
        assert_eq!(infer_theta(&stream(&[]), &model, 0), [0.25; 4]);
        assert_eq!(infer_theta(&stream(&["unseen"]), &model, 0), [0.25; 4]);
        assert!(lda_rank(&stream(&["unseen"]), &model, 0).is_empty());
    }

    #[test]
    fn rows_are_distributions() {
        let (ids, docs) = toy_docs();
        let model = build_lda(ids, &docs, 5, 2, &quick()).unwrap();
        for t in 0..5 {
            assert!((model.phi_row(t).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for d in 0..3 {
            assert!((model.theta_row(d).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn configuration_errors() {
        let (ids, docs) = toy_docs();
        assert!(matches!(
            build_lda(ids.clone(), &docs, 0, 1, &quick()),
            Err(Error::Config(_))
        ));
        let bad = LdaParams {
            beta: 0.0,
            ..quick()
        };
        assert!(matches!(
            build_lda(ids, &docs, 2, 1, &bad),
            Err(Error::Config(_))
        ));
        let empty = vec![stream(&[])];
        assert!(build_lda(vec!["x".into()], &empty, 2, 1, &quick()).is_err());
    }

    fn two_doc_model(theta: Vec<Vec<f64>>) -> LdaModel {
        LdaModel::from_parts(
            vec!["aa".into(), "bb".into()],
            vec!["d1".into(), "d2".into()],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            theta,
            LdaParams::default(),
            0,
        )
        .unwrap()
    }

    #[test]
    fn shared_topic_scores() {
        let model = two_doc_model(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let list = rank_by_theta(&[1.0, 0.0], &model);
        assert_eq!(list.m(), 1);
        assert_eq!(list.items()[0].doc_id, "d1");
        assert_eq!(list.items()[0].score, 1.0);

        let model = two_doc_model(vec![vec![0.2, 0.8], vec![1.0, 0.0]]);
        let list = rank_by_theta(&[0.5, 0.5], &model);
        assert_eq!(list.doc_ids().collect::<Vec<_>>(), ["d1", "d2"]);
        assert!((list.items()[0].score - 0.5).abs() < 1e-15);
        assert!((list.items()[1].score - 0.5).abs() < 1e-15);
    }
}
