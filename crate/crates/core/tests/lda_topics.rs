use llr_core::lda::{build_lda, infer_theta, lda_rank, LdaParams};
use llr_core::TokenStream;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const THEME_A: [&str; 8] = [
    "budget", "vendor", "contract", "invoice", "penalty", "cost", "tender", "payment",
];
const THEME_B: [&str; 8] = [
    "server", "outage", "database", "network", "latency", "backup", "cluster", "patch",
];

fn doc(rng: &mut ChaCha8Rng, vocab: &[&str], len: usize) -> TokenStream {
    (0..len).map(|_| *vocab.choose(rng).unwrap()).collect()
}

fn two_theme_corpus(n_per_theme: usize, len: usize) -> (Vec<String>, Vec<TokenStream>) {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut ids = Vec::new();
    let mut docs = Vec::new();
    for i in 0..n_per_theme {
        ids.push(format!("a{i:02}"));
        docs.push(doc(&mut rng, &THEME_A, len));
        ids.push(format!("b{i:02}"));
        docs.push(doc(&mut rng, &THEME_B, len));
    }
    (ids, docs)
}

fn argmax(row: &[f64]) -> usize {
    row.iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0
}

#[test]
fn distributions_are_normalized() {
    let (ids, docs) = two_theme_corpus(10, 60);
    for k in [1, 2, 5] {
        let model = build_lda(ids.clone(), &docs, k, 7, &LdaParams::default()).unwrap();
        for t in 0..k {
            assert!((model.phi_row(t).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for d in 0..ids.len() {
            assert!((model.theta_row(d).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        let theta = infer_theta(&docs[0], &model, 3);
        assert!((theta.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn reruns_are_bit_identical() {
    let (ids, docs) = two_theme_corpus(6, 40);
    let params = LdaParams::default();
    let a = build_lda(ids.clone(), &docs, 3, 99, &params).unwrap();
    let b = build_lda(ids.clone(), &docs, 3, 99, &params).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let ta = infer_theta(&docs[1], &a, 5);
    let tb = infer_theta(&docs[1], &b, 5);
    assert!(ta.iter().zip(&tb).all(|(x, y)| x.to_bits() == y.to_bits()));
    let c = build_lda(ids, &docs, 3, 100, &params).unwrap();
    assert_ne!(a, c);
}

#[test]
fn disjoint_themes_are_recovered() {
    let (ids, docs) = two_theme_corpus(20, 120);
    let model = build_lda(ids.clone(), &docs, 2, 1, &LdaParams::default()).unwrap();
    let topic_of_a = argmax(model.theta_row(0));
    let topic_of_b = 1 - topic_of_a;
    let pure = ids
        .iter()
        .enumerate()
        .filter(|(d, id)| {
            argmax(model.theta_row(*d))
                == if id.starts_with('a') {
                    topic_of_a
                } else {
                    topic_of_b
                }
        })
        .count();
    let purity = pure as f64 / ids.len() as f64;
    assert!(purity >= 0.9, "purity {purity}");

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let query = doc(&mut rng, &THEME_A, 200);
    let theta = infer_theta(&query, &model, 4);
    assert!(theta[topic_of_a] >= 0.9, "{theta:?}");

    let ranked = lda_rank(&query, &model, 4);
    let top: Vec<&str> = ranked.doc_ids().take(20).collect();
    assert!(top.iter().all(|d| d.starts_with('a')), "{top:?}");
}

#[test]
fn unknown_query_terms_give_no_ranking() {
    let (ids, docs) = two_theme_corpus(4, 30);
    let model = build_lda(ids, &docs, 2, 1, &LdaParams::default()).unwrap();
    let query: TokenStream = ["zebra", "quokka"].into_iter().collect();
    let theta = infer_theta(&query, &model, 1);
    assert!(theta.iter().all(|&p| (p - 0.5).abs() < 1e-12));
    assert!(lda_rank(&query, &model, 1).is_empty());
}

#[test]
fn invalid_parameters_rejected() {
    let (ids, docs) = two_theme_corpus(2, 10);
    assert!(build_lda(ids.clone(), &docs, 0, 1, &LdaParams::default()).is_err());
    let bad = LdaParams {
        beta: 0.0,
        ..LdaParams::default()
    };
    assert!(build_lda(ids, &docs, 2, 1, &bad).is_err());
}
