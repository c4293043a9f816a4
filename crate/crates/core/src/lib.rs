//! Lessons-learned retrieval: index a repository of lessons with several
//! families of IR classifiers (vector space, latent semantic indexing,
//! latent Dirichlet allocation), query it with project issue and risk
//! records, fuse classifiers into hybrids, and measure top-K accuracy.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod fusion;
pub mod grid;
pub mod lda;
pub mod linalg;
pub mod lsi;
pub mod ranking;
pub mod textprep;
pub mod vsm;

pub use corpus::{ArtifactKind, Corpus, LessonRecord, QueryArtifact, RelevanceJudgments};
pub use error::{Error, ErrorKind, Result};
pub use fusion::FusionMethod;
pub use grid::{BuildSettings, ClassifierConfig, Engine, ModelKind};
pub use ranking::{RankedItem, RankedList};
pub use textprep::{PreprocessConfig, TokenStream};
pub use vsm::{SimilarityKind, WeightingScheme};
