//! Latent semantic indexing over a weighted term-document matrix.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{thin_svd, Svd};
use crate::ranking::RankedList;
use crate::textprep::TokenStream;
use crate::vsm::{query_vector, TermDocMatrix, WeightingScheme};

/// Latent-space cosines at or below this are treated as no match. Folding in
/// a query that shares no terms with a document yields round-off noise
/// rather than an exact zero.
pub const LSI_SCORE_FLOOR: f64 = 1e-10;

/// Full SVD of a term-document matrix; every topic count shares one.
#[derive(Debug, Clone)]
pub struct LsiBasis {
    svd: Svd,
    scheme: WeightingScheme,
}

impl LsiBasis {
    pub fn compute(matrix: &TermDocMatrix) -> Self {
        let dense = matrix.to_dense_column_major();
        LsiBasis {
            svd: thin_svd(&dense, matrix.n_terms(), matrix.n_docs()),
            scheme: matrix.scheme(),
        }
    }

    pub fn svd(&self) -> &Svd {
        &self.svd
    }

    /// Rank-`k` truncation. A `k` above `min(terms, docs)` is clamped.
    pub fn truncate(&self, k: usize) -> Result<LsiModel> {
        if k < 1 {
            return Err(Error::Config("LSI topic count must be at least 1".into()));
        }
        let svd = &self.svd;
        let max_k = svd.rank_dim();
        let effective = k.min(max_k);
        if effective < k {
            warn!("LSI: requested {k} topics but matrix supports at most {max_k}; using {max_k}");
        }
        let (m, n) = (svd.rows, svd.cols);
        let mut term_space = vec![0.0; m * effective];
        let mut doc_space = vec![0.0; n * effective];
        for j in 0..effective {
            for (t, &u) in svd.u_col(j).iter().enumerate() {
                term_space[t * effective + j] = u;
            }
            for (d, &v) in svd.v_col(j).iter().enumerate() {
                doc_space[d * effective + j] = v;
            }
        }
        Ok(LsiModel {
            requested_k: k,
            k: effective,
            scheme: self.scheme,
            zero_tolerance: svd.zero_tolerance(),
            singular_values: svd.s[..effective].to_vec(),
            term_space,
            doc_space,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsiModel {
    pub requested_k: usize,
    /// Effective topic count after clamping.
    pub k: usize,
    pub scheme: WeightingScheme,
    zero_tolerance: f64,
    singular_values: Vec<f64>,
    /// terms × k, row-major.
    term_space: Vec<f64>,
    /// docs × k, row-major; row `d` is document `d` in topic space.
    doc_space: Vec<f64>,
}

impl LsiModel {
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn term_row(&self, term: usize) -> &[f64] {
        &self.term_space[term * self.k..(term + 1) * self.k]
    }

    pub fn doc_row(&self, doc: usize) -> &[f64] {
        &self.doc_space[doc * self.k..(doc + 1) * self.k]
    }

    /// Dimensions whose singular value is numerically non-zero.
    fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > self.zero_tolerance)
            .map(|(j, _)| j)
    }

    /// Folds a weighted query vector into topic space: `Σ⁻¹ Uᵀ q`, with zero
    /// singular values excluded (their coordinates are left at 0).
    pub fn fold_in(&self, query: &crate::vsm::SparseVector) -> Vec<f64> {
        let mut acc = vec![0.0; self.k];
        for &(t, w) in query.entries() {
            for (a, u) in acc.iter_mut().zip(self.term_row(t as usize)) {
                *a += w * u;
            }
        }
        let mut out = vec![0.0; self.k];
        for j in self.active() {
            out[j] = acc[j] / self.singular_values[j];
        }
        out
    }
}

/// Rank-`k` LSI model of `matrix`.
pub fn build_lsi(matrix: &TermDocMatrix, k: usize) -> Result<LsiModel> {
    if k < 1 {
        return Err(Error::Config("LSI topic count must be at least 1".into()));
    }
    LsiBasis::compute(matrix).truncate(k)
}

/// Ranks documents by cosine with the folded-in query. Both the query and
/// the documents are compared in the singular-value-scaled space, where
/// full-rank LSI reproduces VSM cosine order.
pub fn lsi_rank(query: &TokenStream, model: &LsiModel, matrix: &TermDocMatrix) -> RankedList {
    let q = query_vector(query, matrix, model.scheme);
    if q.is_zero() {
        return RankedList::empty();
    }
    let folded = model.fold_in(&q);
    let active: Vec<usize> = model.active().collect();
    let scaled_query: Vec<f64> = active
        .iter()
        .map(|&j| folded[j] * model.singular_values[j])
        .collect();
    let q_norm = norm(&scaled_query);
    if q_norm == 0.0 {
        return RankedList::empty();
    }
    let scores = matrix.doc_ids().iter().enumerate().map(|(d, id)| {
        let row = model.doc_row(d);
        let mut dot = 0.0;
        let mut dn = 0.0;
        for (qi, &j) in scaled_query.iter().zip(&active) {
            let x = row[j] * model.singular_values[j];
            dot += qi * x;
            dn += x * x;
        }
        let score = if dn == 0.0 {
            0.0
        } else {
            dot / (q_norm * dn.sqrt())
        };
        (id.as_str(), score)
    });
    RankedList::from_scores_above(scores, LSI_SCORE_FLOOR)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
