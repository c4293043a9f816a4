//! Deterministic inputs shared by the benchmarks.

use llr_core::eval::synthetic::generate_default_corpus;
use llr_core::textprep::{preprocess, PreprocessConfig};
use llr_core::{Corpus, RankedList, TokenStream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `members` lists of `len` random positive scores over 300 documents.
pub fn random_lists(seed: u64, members: usize, len: usize) -> Vec<RankedList> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..members)
        .map(|_| {
            RankedList::from_scores((0..len).map(|_| {
                (
                    format!("d{:03}", rng.random_range(0..300)),
                    rng.random_range(0.001..1.0),
                )
            }))
        })
        .collect()
}

/// Random dense column-major matrix.
pub fn random_matrix(seed: u64, rows: usize, cols: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows * cols)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect()
}

/// The default synthetic corpus.
pub fn corpus() -> Corpus {
    generate_default_corpus(1).expect("default corpus")
}

/// Lesson ids and stem+stop token streams of `corpus`.
pub fn documents(corpus: &Corpus) -> (Vec<String>, Vec<TokenStream>) {
    let ids = corpus.lessons().iter().map(|l| l.id.clone()).collect();
    let docs = corpus
        .lessons()
        .iter()
        .map(|l| preprocess(&l.document_text(), PreprocessConfig::STEM_STOP))
        .collect();
    (ids, docs)
}
