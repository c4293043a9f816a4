use llr_core::lsi::{build_lsi, lsi_rank, LsiBasis};
use llr_core::textprep::tokenize;
use llr_core::vsm::{query_vector, vsm_rank, TermDocMatrix};
use llr_core::{SimilarityKind, WeightingScheme};
use nalgebra::DMatrix;

const DOCS: [&str; 4] = [
    "budget overrun vendor contract budget",
    "vendor delay contract penalty",
    "server outage database pool",
    "database migration server downtime outage",
];

fn matrix(scheme: WeightingScheme) -> TermDocMatrix {
    let ids = (0..DOCS.len()).map(|i| format!("d{i}")).collect();
    let toks: Vec<_> = DOCS.iter().map(|d| tokenize(d)).collect();
    TermDocMatrix::from_tokens(ids, &toks, scheme).unwrap()
}

/// Rank-k scores computed with nalgebra: cosine between `U_kᵀ q` and
/// `Σ_k V_k` rows.
fn oracle_scores(m: &TermDocMatrix, query: &str, scheme: WeightingScheme, k: usize) -> Vec<f64> {
    let a = DMatrix::from_column_slice(m.n_terms(), m.n_docs(), &m.to_dense_column_major());
    let svd = a.svd(true, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| {
        svd.singular_values[y]
            .partial_cmp(&svd.singular_values[x])
            .unwrap()
    });
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let q = query_vector(&tokenize(query), m, scheme);
    let mut dense_q = vec![0.0; m.n_terms()];
    for &(t, w) in q.entries() {
        dense_q[t as usize] = w;
    }
    let q_hat: Vec<f64> = order[..k]
        .iter()
        .map(|&j| (0..m.n_terms()).map(|t| u[(t, j)] * dense_q[t]).sum())
        .collect();
    (0..m.n_docs())
        .map(|d| {
            let doc: Vec<f64> = order[..k]
                .iter()
                .map(|&j| svd.singular_values[j] * vt[(j, d)])
                .collect();
            let dot: f64 = q_hat.iter().zip(&doc).map(|(a, b)| a * b).sum();
            let nq = q_hat.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nd = doc.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nq == 0.0 || nd == 0.0 {
                0.0
            } else {
                dot / (nq * nd)
            }
        })
        .collect()
}

#[test]
fn rank_two_scores_match_oracle() {
    for scheme in [
        WeightingScheme::Tfidf,
        WeightingScheme::SublinearTfidf,
        WeightingScheme::Boolean,
    ] {
        let m = matrix(scheme);
        let model = build_lsi(&m, 2).unwrap();
        for query in ["vendor contract", "server database", "budget outage"] {
            let expected = oracle_scores(&m, query, scheme, 2);
            let got = lsi_rank(&tokenize(query), &model, &m);
            for (d, &e) in expected.iter().enumerate() {
                let id = format!("d{d}");
                match got.get(&id) {
                    Some(item) => assert!(
                        (item.score - e).abs() < 1e-9,
                        "{query} {id}: {} vs {e}",
                        item.score
                    ),
                    None => assert!(e <= 1e-10, "{query} {id}: dropped but oracle gives {e}"),
                }
            }
        }
    }
}

#[test]
fn topic_space_separates_themes() {
    let m = matrix(WeightingScheme::Tfidf);
    let model = build_lsi(&m, 2).unwrap();
    let ranked = lsi_rank(&tokenize("vendor contract"), &model, &m);
    let top: Vec<&str> = ranked.doc_ids().take(2).collect();
    assert_eq!(top.len(), 2);
    assert!(top.iter().all(|d| *d == "d0" || *d == "d1"), "{top:?}");
}

#[test]
fn full_rank_matches_vsm_cosine() {
    let m = matrix(WeightingScheme::Tfidf);
    let model = LsiBasis::compute(&m).truncate(4).unwrap();
    for query in [
        "vendor contract",
        "server database outage",
        "budget penalty migration",
    ] {
        let q = tokenize(query);
        let lsi = lsi_rank(&q, &model, &m);
        let vsm = vsm_rank(&q, &m, WeightingScheme::Tfidf, SimilarityKind::Cosine);
        assert_eq!(lsi.len(), vsm.len(), "{query}");
        // Same order; scores differ only by the query's projection length.
        let ratio = lsi.items()[0].score / vsm.items()[0].score;
        for (a, b) in lsi.items().iter().zip(vsm.items()) {
            assert_eq!(a.doc_id, b.doc_id, "{query}");
            assert!(
                (a.score - ratio * b.score).abs() < 1e-9,
                "{query}: {a:?} vs {b:?}"
            );
        }
    }
}

#[test]
fn oversized_k_is_clamped() {
    let m = matrix(WeightingScheme::Tfidf);
    let model = build_lsi(&m, 256).unwrap();
    assert_eq!(model.requested_k, 256);
    assert_eq!(model.k, 4);
    assert!(build_lsi(&m, 0).is_err());
}

#[test]
fn out_of_vocabulary_query_is_empty() {
    let m = matrix(WeightingScheme::Tfidf);
    let model = build_lsi(&m, 2).unwrap();
    assert!(lsi_rank(&tokenize("zebra"), &model, &m).is_empty());
}
