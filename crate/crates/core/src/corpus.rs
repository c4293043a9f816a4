//! Lessons, query artifacts and relevance judgments, plus their file formats.
//!
//! On disk a corpus is three UTF-8 files:
//!
//! * lessons: JSON Lines with keys `id`, `project_id`, `context`, `problem`,
//!   `recommended_actions`;
//! * artifacts: JSON Lines with keys `id`, `kind` (`"issue"` or `"risk"`),
//!   `title`, `description`;
//! * judgments: tab-separated `artifact_id<TAB>lesson_id`, one pair per line.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const LESSONS_FILE: &str = "lessons.jsonl";
pub const ARTIFACTS_FILE: &str = "artifacts.jsonl";
pub const JUDGMENTS_FILE: &str = "judgments.tsv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LessonRecord {
    pub id: String,
    pub project_id: String,
    pub context: String,
    pub problem: String,
    pub recommended_actions: String,
}

impl LessonRecord {
    /// The retrievable document: context, problem and recommended actions
    /// joined by single spaces, with empty fields skipped. No other
    /// transformation is applied.
    pub fn document_text(&self) -> String {
        join_non_empty(&[&self.context, &self.problem, &self.recommended_actions])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Issue,
    Risk,
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArtifactKind::Issue => "issue",
            ArtifactKind::Risk => "risk",
        })
    }
}

/// A project-management issue or risk entry. Its text is the query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryArtifact {
    pub id: String,
    pub kind: ArtifactKind,
    pub title: String,
    pub description: String,
}

impl QueryArtifact {
    /// Title and description joined by a single space.
    pub fn query_string(&self) -> String {
        join_non_empty(&[&self.title, &self.description])
    }
}

pub fn artifact_query_string(artifact: &QueryArtifact) -> String {
    artifact.query_string()
}

pub fn lesson_document_text(lesson: &LessonRecord) -> String {
    lesson.document_text()
}

fn join_non_empty(parts: &[&str]) -> String {
    let mut out = String::new();
    for part in parts.iter().filter(|p| !p.is_empty()) {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(part);
    }
    out
}

/// Artifact id to the set of lesson ids judged relevant. Every artifact of a
/// [`Corpus`] has an entry, possibly empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelevanceJudgments {
    relevant: BTreeMap<String, BTreeSet<String>>,
}

impl RelevanceJudgments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, artifact_id: impl Into<String>, lesson_id: impl Into<String>) {
        self.relevant
            .entry(artifact_id.into())
            .or_default()
            .insert(lesson_id.into());
    }

    pub fn relevant(&self, artifact_id: &str) -> Option<&BTreeSet<String>> {
        self.relevant.get(artifact_id)
    }

    pub fn is_relevant(&self, artifact_id: &str, lesson_id: &str) -> bool {
        self.relevant
            .get(artifact_id)
            .is_some_and(|s| s.contains(lesson_id))
    }

    /// Number of (artifact, lesson) pairs.
    pub fn pair_count(&self) -> usize {
        self.relevant.values().map(BTreeSet::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.relevant.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn ensure_entry(&mut self, artifact_id: &str) {
        self.relevant.entry(artifact_id.to_string()).or_default();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    lessons: Vec<LessonRecord>,
    artifacts: Vec<QueryArtifact>,
    judgments: RelevanceJudgments,
}

impl Corpus {
    /// Validates and assembles a corpus.
    pub fn new(
        lessons: Vec<LessonRecord>,
        artifacts: Vec<QueryArtifact>,
        mut judgments: RelevanceJudgments,
    ) -> Result<Self> {
        if lessons.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut lesson_ids = HashSet::new();
        for lesson in &lessons {
            if lesson.id.trim().is_empty() {
                return Err(Error::InvalidRecord {
                    id: lesson.id.clone(),
                    reason: "lesson id is empty".into(),
                });
            }
            if !lesson_ids.insert(lesson.id.as_str()) {
                return Err(Error::DuplicateId {
                    what: "lesson",
                    id: lesson.id.clone(),
                });
            }
            if [
                &lesson.context,
                &lesson.problem,
                &lesson.recommended_actions,
            ]
            .iter()
            .all(|t| t.trim().is_empty())
            {
                return Err(Error::InvalidRecord {
                    id: lesson.id.clone(),
                    reason: "lesson has no text".into(),
                });
            }
        }
        let mut artifact_ids = HashSet::new();
        for artifact in &artifacts {
            if artifact.id.trim().is_empty() {
                return Err(Error::InvalidRecord {
                    id: artifact.id.clone(),
                    reason: "artifact id is empty".into(),
                });
            }
            if !artifact_ids.insert(artifact.id.as_str()) {
                return Err(Error::DuplicateId {
                    what: "artifact",
                    id: artifact.id.clone(),
                });
            }
        }
        for (artifact_id, relevant) in judgments.iter() {
            if !artifact_ids.contains(artifact_id) {
                return Err(Error::DanglingReference {
                    what: "artifact",
                    id: artifact_id.to_string(),
                });
            }
            if let Some(lesson_id) = relevant.iter().find(|l| !lesson_ids.contains(l.as_str())) {
                return Err(Error::DanglingReference {
                    what: "lesson",
                    id: lesson_id.clone(),
                });
            }
        }
        for artifact in &artifacts {
            judgments.ensure_entry(&artifact.id);
        }
        Ok(Corpus {
            lessons,
            artifacts,
            judgments,
        })
    }

    pub fn lessons(&self) -> &[LessonRecord] {
        &self.lessons
    }

    pub fn artifacts(&self) -> &[QueryArtifact] {
        &self.artifacts
    }

    pub fn judgments(&self) -> &RelevanceJudgments {
        &self.judgments
    }

    pub fn artifact(&self, id: &str) -> Option<&QueryArtifact> {
        self.artifacts.iter().find(|a| a.id == id)
    }

    pub fn lesson_ids(&self) -> Vec<&str> {
        self.lessons.iter().map(|l| l.id.as_str()).collect()
    }

    /// SHA-256 over the lesson documents, hex encoded. Models depend only on
    /// the lessons, so artifacts and judgments are excluded.
    pub fn lessons_digest(&self) -> String {
        let mut hasher = Sha256::new();
        for lesson in &self.lessons {
            for field in [
                &lesson.id,
                &lesson.project_id,
                &lesson.context,
                &lesson.problem,
                &lesson.recommended_actions,
            ] {
                hasher.update((field.len() as u64).to_le_bytes());
                hasher.update(field.as_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }

    /// Writes the three corpus files into `dir` using the standard names.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.save(
            &dir.join(LESSONS_FILE),
            &dir.join(ARTIFACTS_FILE),
            &dir.join(JUDGMENTS_FILE),
        )
    }

    pub fn save(
        &self,
        lessons_path: &Path,
        artifacts_path: &Path,
        judgments_path: &Path,
    ) -> Result<()> {
        write_jsonl(lessons_path, &self.lessons)?;
        write_jsonl(artifacts_path, &self.artifacts)?;

        let file = fs::File::create(judgments_path).map_err(|e| Error::io(judgments_path, e))?;
        let mut writer = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .has_headers(false)
            .from_writer(BufWriter::new(file));
        // Artifact order first so files diff cleanly against the artifacts file.
        for artifact in &self.artifacts {
            if let Some(relevant) = self.judgments.relevant(&artifact.id) {
                for lesson_id in relevant {
                    writer.write_record([artifact.id.as_str(), lesson_id.as_str()])?;
                }
            }
        }
        writer.flush().map_err(|e| Error::io(judgments_path, e))?;
        Ok(())
    }
}

/// Loads and validates a corpus from its three files.
pub fn load_corpus(
    lessons_path: &Path,
    artifacts_path: &Path,
    judgments_path: &Path,
) -> Result<Corpus> {
    let lessons: Vec<LessonRecord> = read_jsonl(lessons_path)?;
    let artifacts: Vec<QueryArtifact> = read_jsonl(artifacts_path)?;
    let judgments = read_judgments(judgments_path)?;
    Corpus::new(lessons, artifacts, judgments)
}

/// Loads `lessons.jsonl`, `artifacts.jsonl` and `judgments.tsv` from `dir`.
pub fn load_corpus_dir(dir: &Path) -> Result<Corpus> {
    let (l, a, j) = corpus_paths(dir);
    load_corpus(&l, &a, &j)
}

pub fn corpus_paths(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    (
        dir.join(LESSONS_FILE),
        dir.join(ARTIFACTS_FILE),
        dir.join(JUDGMENTS_FILE),
    )
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

fn read_judgments(path: &Path) -> Result<RelevanceJudgments> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut judgments = RelevanceJudgments::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            [artifact, lesson] if !artifact.trim().is_empty() && !lesson.trim().is_empty() => {
                judgments.add(artifact.trim(), lesson.trim());
            }
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: format!(
                        "expected `artifact_id<TAB>lesson_id`, found {} field(s)",
                        fields.len()
                    ),
                })
            }
        }
    }
    Ok(judgments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lesson(id: &str, context: &str, problem: &str, actions: &str) -> LessonRecord {
        LessonRecord {
            id: id.into(),
            project_id: "P1".into(),
            context: context.into(),
            problem: problem.into(),
            recommended_actions: actions.into(),
        }
    }

    fn artifact(id: &str, title: &str, description: &str) -> QueryArtifact {
        QueryArtifact {
            id: id.into(),
            kind: ArtifactKind::Issue,
            title: title.into(),
            description: description.into(),
        }
    }

    #[test]
    fn query_string_concatenation() {
        let a = artifact("A1", "server outage", "db connection pool exhausted");
        assert_eq!(
            a.query_string(),
            "server outage db connection pool exhausted"
        );
        assert_eq!(artifact("A2", "", "x").query_string(), "x");
        assert_eq!(artifact("A3", "", "").query_string(), "");
    }

    #[test]
    fn document_text_concatenation() {
        let l = lesson("L1", "ctx", "prob", "act");
        assert_eq!(l.document_text(), "ctx prob act");
        assert_eq!(
            lesson("L2", "", "only problem", "").document_text(),
            "only problem"
        );
    }

    #[test]
    fn document_text_keeps_record_verbatim() {
        let l = lesson(
            "LL-mobile",
            "the project scope includes an implementation of a small-sized mobile application.",
            "the organizational process overhead will affect the profit.",
            "outsource the implementation to an external mobile application specialized company.",
        );
        let text = l.document_text();
        assert!(text.contains("outsource the implementation"));
        assert!(text.starts_with(&l.context));
        assert!(text.ends_with(&l.recommended_actions));
    }

    #[test]
    fn rejects_duplicates_and_dangling() {
        let err = Corpus::new(
            vec![lesson("L1", "a", "", ""), lesson("L1", "b", "", "")],
            vec![],
            RelevanceJudgments::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateId { what: "lesson", .. }));

        let mut j = RelevanceJudgments::new();
        j.add("A1", "L9");
        let err = Corpus::new(
            vec![lesson("L1", "a", "", "")],
            vec![artifact("A1", "t", "d")],
            j,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::DanglingReference { what: "lesson", .. }
        ));

        let mut j = RelevanceJudgments::new();
        j.add("A9", "L1");
        let err = Corpus::new(vec![lesson("L1", "a", "", "")], vec![], j).unwrap_err();
        assert!(matches!(
            err,
            Error::DanglingReference {
                what: "artifact",
                ..
            }
        ));
    }

    #[test]
    fn rejects_textless_lesson_and_empty_corpus() {
        let err = Corpus::new(
            vec![lesson("L1", " ", "", "")],
            vec![],
            RelevanceJudgments::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidRecord { .. }));
        assert!(matches!(
            Corpus::new(vec![], vec![], RelevanceJudgments::new()),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn every_artifact_gets_a_judgment_entry() {
        let c = Corpus::new(
            vec![lesson("L1", "a", "", "")],
            vec![artifact("A1", "t", "d")],
            RelevanceJudgments::new(),
        )
        .unwrap();
        assert_eq!(c.judgments().relevant("A1").map(BTreeSet::len), Some(0));
    }
}
