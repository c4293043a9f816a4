//! Vector space model: weighted term-document matrix and cosine/overlap
//! retrieval.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::ranking::RankedList;
use crate::textprep::{preprocess_with, PreprocessConfig, Stopwords, TokenStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeightingScheme {
    Tfidf,
    SublinearTfidf,
    Boolean,
}

impl WeightingScheme {
    pub const ALL: [Self; 3] = [Self::Tfidf, Self::SublinearTfidf, Self::Boolean];

    pub fn name(self) -> &'static str {
        match self {
            Self::Tfidf => "tfidf",
            Self::SublinearTfidf => "sublinear",
            Self::Boolean => "boolean",
        }
    }

    /// Weight of a term with raw frequency `tf` and inverse document
    /// frequency `idf`.
    pub fn weight(self, tf: u32, idf: f64) -> f64 {
        if tf == 0 {
            return 0.0;
        }
        match self {
            Self::Tfidf => f64::from(tf) * idf,
            Self::SublinearTfidf => (1.0 + f64::from(tf).ln()) * idf,
            Self::Boolean => 1.0,
        }
    }
}

impl fmt::Display for WeightingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown weighting scheme `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimilarityKind {
    Cosine,
    Overlap,
}

impl SimilarityKind {
    pub const ALL: [Self; 2] = [Self::Cosine, Self::Overlap];
}

/// Sparse vector over term indices, sorted by index, no zero entries.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    /// Builds from unordered entries; zeros are dropped and duplicate indices
    /// summed.
    pub fn from_entries(entries: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut map: BTreeMap<u32, f64> = BTreeMap::new();
        for (i, v) in entries {
            *map.entry(i).or_insert(0.0) += v;
        }
        SparseVector {
            entries: map.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: u32) -> f64 {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v).sum()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        self.merge_fold(other, |a, b| a * b)
    }

    /// `Σ_t min(self_t, other_t)` over shared terms.
    pub fn min_sum(&self, other: &SparseVector) -> f64 {
        self.merge_fold(other, f64::min)
    }

    fn merge_fold(&self, other: &SparseVector, f: impl Fn(f64, f64) -> f64) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += f(a[i].1, b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub(crate) fn map_values(&self, f: impl Fn(f64) -> f64) -> SparseVector {
        SparseVector {
            entries: self.entries.iter().map(|&(i, v)| (i, f(v))).collect(),
        }
    }
}

/// Weighted term × document matrix, stored as one sparse column per lesson.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDocMatrix {
    scheme: WeightingScheme,
    /// Sorted; a term's index is its position.
    vocabulary: Vec<String>,
    doc_ids: Vec<String>,
    doc_freq: Vec<u32>,
    idf: Vec<f64>,
    columns: Vec<SparseVector>,
}

impl TermDocMatrix {
    /// Builds the matrix from already-preprocessed documents.
    pub fn from_tokens(
        doc_ids: Vec<String>,
        docs: &[TokenStream],
        scheme: WeightingScheme,
    ) -> Result<Self> {
        assert_eq!(doc_ids.len(), docs.len(), "one token stream per document");
        if docs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut term_freqs: Vec<BTreeMap<&str, u32>> = Vec::with_capacity(docs.len());
        let mut doc_freq_by_term: BTreeMap<&str, u32> = BTreeMap::new();
        for doc in docs {
            let mut tf: BTreeMap<&str, u32> = BTreeMap::new();
            for token in doc.iter() {
                *tf.entry(token).or_insert(0) += 1;
            }
            for term in tf.keys() {
                *doc_freq_by_term.entry(term).or_insert(0) += 1;
            }
            term_freqs.push(tf);
        }
        if doc_freq_by_term.is_empty() {
            return Err(Error::EmptyVocabulary);
        }

        let n_docs = docs.len() as f64;
        let vocabulary: Vec<String> = doc_freq_by_term.keys().map(|t| t.to_string()).collect();
        let doc_freq: Vec<u32> = doc_freq_by_term.values().copied().collect();
        let idf: Vec<f64> = doc_freq
            .iter()
            .map(|&df| (n_docs / f64::from(df)).ln())
            .collect();

        let columns = term_freqs
            .iter()
            .map(|tf| {
                SparseVector::from_entries(tf.iter().map(|(term, &count)| {
                    let idx = vocabulary
                        .binary_search_by(|v| v.as_str().cmp(term))
                        .expect("term indexed");
                    (idx as u32, scheme.weight(count, idf[idx]))
                }))
            })
            .collect();

        Ok(TermDocMatrix {
            scheme,
            vocabulary,
            doc_ids,
            doc_freq,
            idf,
            columns,
        })
    }

    pub fn scheme(&self) -> WeightingScheme {
        self.scheme
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.vocabulary
            .binary_search_by(|v| v.as_str().cmp(term))
            .ok()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn n_terms(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc_freq(&self, term_index: usize) -> u32 {
        self.doc_freq[term_index]
    }

    pub fn idf(&self, term_index: usize) -> f64 {
        self.idf[term_index]
    }

    pub fn column(&self, doc: usize) -> &SparseVector {
        &self.columns[doc]
    }

    pub fn columns(&self) -> &[SparseVector] {
        &self.columns
    }

    pub fn weight(&self, term: &str, doc: usize) -> f64 {
        self.term_index(term)
            .map_or(0.0, |t| self.columns[doc].get(t as u32))
    }

    /// Dense copy, terms as rows, documents as columns (column-major).
    pub fn to_dense_column_major(&self) -> Vec<f64> {
        let rows = self.n_terms();
        let mut out = vec![0.0; rows * self.n_docs()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(t, w) in col.entries() {
                out[j * rows + t as usize] = w;
            }
        }
        out
    }

    /// Returns a copy with each document column scaled by `factor(doc)`.
    pub fn scale_columns(&self, factor: impl Fn(usize) -> f64) -> TermDocMatrix {
        let mut out = self.clone();
        for (j, col) in out.columns.iter_mut().enumerate() {
            let a = factor(j);
            *col = col.map_values(|v| v * a);
        }
        out
    }
}

/// Preprocesses every lesson document with `prep`.
pub fn corpus_tokens(
    corpus: &Corpus,
    prep: PreprocessConfig,
    stopwords: &Stopwords,
) -> Vec<TokenStream> {
    corpus
        .lessons()
        .iter()
        .map(|l| preprocess_with(&l.document_text(), prep, stopwords))
        .collect()
}

/// Builds the weighted matrix for a corpus using the embedded stopword list.
pub fn build_matrix(
    corpus: &Corpus,
    prep: PreprocessConfig,
    scheme: WeightingScheme,
) -> Result<TermDocMatrix> {
    build_matrix_with(corpus, prep, scheme, Stopwords::embedded())
}

pub fn build_matrix_with(
    corpus: &Corpus,
    prep: PreprocessConfig,
    scheme: WeightingScheme,
    stopwords: &Stopwords,
) -> Result<TermDocMatrix> {
    let ids = corpus.lessons().iter().map(|l| l.id.clone()).collect();
    TermDocMatrix::from_tokens(ids, &corpus_tokens(corpus, prep, stopwords), scheme)
}

/// Weights the query's terms with `scheme`, using query term frequency and
/// the corpus idf. Out-of-vocabulary terms are dropped.
pub fn query_vector(
    query: &TokenStream,
    matrix: &TermDocMatrix,
    scheme: WeightingScheme,
) -> SparseVector {
    let mut tf: BTreeMap<usize, u32> = BTreeMap::new();
    for token in query.iter() {
        if let Some(t) = matrix.term_index(token) {
            *tf.entry(t).or_insert(0) += 1;
        }
    }
    SparseVector::from_entries(
        tf.into_iter()
            .map(|(t, count)| (t as u32, scheme.weight(count, matrix.idf(t)))),
    )
}

pub fn cosine(a: &SparseVector, b: &SparseVector) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.dot(b) / (na * nb)
}

/// Weighted overlap coefficient `Σ min(a_t, b_t) / min(Σ a, Σ b)`.
pub fn overlap(a: &SparseVector, b: &SparseVector) -> f64 {
    let denom = a.sum().min(b.sum());
    if denom <= 0.0 {
        return 0.0;
    }
    a.min_sum(b) / denom
}

pub fn vsm_rank(
    query: &TokenStream,
    matrix: &TermDocMatrix,
    scheme: WeightingScheme,
    sim: SimilarityKind,
) -> RankedList {
    let q = query_vector(query, matrix, scheme);
    if q.is_zero() {
        return RankedList::empty();
    }
    let score = match sim {
        SimilarityKind::Cosine => cosine,
        SimilarityKind::Overlap => overlap,
    };
    RankedList::from_scores(
        matrix
            .doc_ids
            .iter()
            .zip(&matrix.columns)
            .map(|(id, col)| (id.as_str(), score(&q, col))),
    )
}
