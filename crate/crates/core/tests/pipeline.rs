use std::fs;

use llr_core::corpus::{load_corpus, load_corpus_dir, JUDGMENTS_FILE, LESSONS_FILE};
use llr_core::eval::{run_experiment, run_grid, synthetic::generate_synthetic_corpus, EvalConfig};
use llr_core::grid::{cache_path, enumerate_grid, run_classifier};
use llr_core::lda::LdaParams;
use llr_core::{
    ArtifactKind, BuildSettings, ClassifierConfig, Corpus, Engine, Error, LessonRecord,
    QueryArtifact, RelevanceJudgments,
};
use proptest::prelude::*;

fn quick_settings() -> BuildSettings {
    BuildSettings {
        lda: LdaParams {
            train_sweeps: 30,
            infer_sweeps: 10,
            ..LdaParams::default()
        },
        ..BuildSettings::default()
    }
}

fn lesson(id: &str, text: &str) -> LessonRecord {
    LessonRecord {
        id: id.into(),
        project_id: "P1".into(),
        context: text.into(),
        problem: String::new(),
        recommended_actions: String::new(),
    }
}

fn artifact(id: &str, title: &str) -> QueryArtifact {
    QueryArtifact {
        id: id.into(),
        kind: ArtifactKind::Risk,
        title: title.into(),
        description: String::new(),
    }
}

fn small_corpus() -> Corpus {
    let mut j = RelevanceJudgments::new();
    j.add("R1", "L1");
    Corpus::new(
        vec![
            lesson("L1", "vendor contract penalty clauses"),
            lesson("L2", "server outage database backup"),
            lesson("L3", "budget overrun vendor invoices"),
        ],
        vec![artifact("R1", "vendor penalty"), artifact("R2", "")],
        j,
    )
    .unwrap()
}

#[test]
fn loads_three_files() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus().save_dir(dir.path()).unwrap();
    let c = load_corpus_dir(dir.path()).unwrap();
    assert_eq!(
        (
            c.lessons().len(),
            c.artifacts().len(),
            c.judgments().pair_count()
        ),
        (3, 2, 1)
    );
}

#[test]
fn load_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus().save_dir(dir.path()).unwrap();
    let (l, a, j) = llr_core::corpus::corpus_paths(dir.path());

    fs::write(&j, "R1\tL9\n").unwrap();
    assert!(matches!(
        load_corpus(&l, &a, &j),
        Err(Error::DanglingReference { .. })
    ));

    fs::write(dir.path().join(JUDGMENTS_FILE), "R1\tL1\n").unwrap();
    let mut text = fs::read_to_string(&l).unwrap();
    text.push_str("{not json\n");
    fs::write(dir.path().join(LESSONS_FILE), &text).unwrap();
    match load_corpus(&l, &a, &j) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected parse error, got {other:?}"),
    }

    let first = text.lines().next().unwrap().to_string();
    fs::write(&l, format!("{first}\n{first}\n")).unwrap();
    assert!(matches!(
        load_corpus(&l, &a, &j),
        Err(Error::DuplicateId { .. })
    ));
}

#[test]
fn empty_query_ranks_nothing() {
    let corpus = small_corpus();
    let settings = quick_settings();
    let empty = corpus.artifact("R2").unwrap();
    for config in enumerate_grid() {
        let list = run_classifier(&config, &corpus, empty, &settings).unwrap();
        assert!(list.is_empty(), "{config}");
    }
}

#[test]
fn cached_models_rank_identically() {
    let corpus = generate_synthetic_corpus(4, 24, 5, 3).unwrap();
    let cache = tempfile::tempdir().unwrap();
    let settings = BuildSettings {
        cache_dir: Some(cache.path().to_path_buf()),
        ..quick_settings()
    };
    let configs: Vec<ClassifierConfig> = [
        "vsm:stem:tfidf:cosine:-",
        "lsi:stop:boolean:cosine:32",
        "lda:none:-:condprob:32",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();

    let fresh = Engine::build(&corpus, settings.clone(), &configs).unwrap();
    let first = fresh.rank_all(&configs, corpus.artifacts()).unwrap();
    for c in &configs {
        assert!(cache_path(cache.path(), fresh.fingerprint(), c).is_file());
    }

    let reloaded = Engine::build(&corpus, settings.clone(), &configs).unwrap();
    assert_eq!(
        reloaded.rank_all(&configs, corpus.artifacts()).unwrap(),
        first
    );

    // A damaged cache entry is rebuilt rather than trusted.
    fs::write(
        cache_path(cache.path(), fresh.fingerprint(), &configs[2]),
        b"garbage",
    )
    .unwrap();
    let rebuilt = Engine::build(&corpus, settings, &configs).unwrap();
    assert_eq!(
        rebuilt.rank_all(&configs, corpus.artifacts()).unwrap(),
        first
    );
}

#[test]
fn seed_changes_the_fingerprint() {
    let corpus = small_corpus();
    let a = Engine::build(&corpus, quick_settings(), &[]).unwrap();
    let b = Engine::build(
        &corpus,
        BuildSettings {
            master_seed: 1,
            ..quick_settings()
        },
        &[],
    )
    .unwrap();
    assert_ne!(a.fingerprint(), b.fingerprint());
}

#[test]
fn grid_results_are_reproducible() {
    let corpus = generate_synthetic_corpus(2, 30, 6, 4).unwrap();
    let eval = EvalConfig {
        k: 5,
        master_seed: 77,
    };
    let a = run_grid(&corpus, &eval, &quick_settings()).unwrap();
    let b = run_grid(&corpus, &eval, &quick_settings()).unwrap();
    assert_eq!(a.len(), 88);
    assert_eq!(a, b);
    assert!(a.iter().all(|r| (0.0..=1.0).contains(&r.top_k)));
}

#[test]
fn agreeing_members_give_zero_improvement() {
    // One theme: every lesson is relevant to every artifact, so any
    // classifier that retrieves anything scores 1.0.
    let corpus = generate_synthetic_corpus(5, 20, 4, 1).unwrap();
    let report = run_experiment(
        &corpus,
        &EvalConfig {
            k: 20,
            master_seed: 3,
        },
        &quick_settings(),
    )
    .unwrap();
    assert_eq!(report.rows.len(), 22);
    for row in &report.rows {
        assert_eq!(row.top_individual, 1.0);
        assert_eq!(row.ri_borda, 0.0);
        assert_eq!(row.ri_score_addition, 0.0);
    }
}

#[test]
fn experiment_report_invariants() {
    let corpus = generate_synthetic_corpus(6, 40, 8, 5).unwrap();
    let report = run_experiment(
        &corpus,
        &EvalConfig {
            k: 10,
            master_seed: 9,
        },
        &quick_settings(),
    )
    .unwrap();
    assert_eq!(report.rows.len(), 22);
    assert_eq!(report.queries, 8);
    for row in &report.rows {
        for p in [row.top_individual, row.borda, row.score_addition] {
            assert!((0.0..=1.0).contains(&p));
        }
        assert_eq!(row.ri_borda > 0.0, row.borda > row.top_individual);
        assert_eq!(
            row.ri_score_addition < 0.0,
            row.score_addition < row.top_individual
        );
    }
    let again = run_experiment(
        &corpus,
        &EvalConfig {
            k: 10,
            master_seed: 9,
        },
        &quick_settings(),
    )
    .unwrap();
    assert_eq!(report.report_csv().unwrap(), again.report_csv().unwrap());
    assert_eq!(report.report_json().unwrap(), again.report_json().unwrap());
    let csv = String::from_utf8(report.report_csv().unwrap()).unwrap();
    assert!(csv.starts_with(
        "comb_id,members,top_individual,score_addition,ri_score_addition,borda,ri_borda\n"
    ));
    assert_eq!(csv.lines().count(), 23);
}

#[test]
fn experiment_needs_judgments() {
    let corpus = Corpus::new(
        vec![lesson("L1", "vendor contract")],
        vec![artifact("R1", "vendor")],
        RelevanceJudgments::new(),
    )
    .unwrap();
    assert!(matches!(
        run_experiment(&corpus, &EvalConfig::default(), &quick_settings()),
        Err(Error::UndefinedMetric(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn save_load_round_trip(seed in any::<u64>(), lessons in 1usize..30, artifacts in 1usize..8, themes in 1usize..5) {
        let themes = themes.min(lessons);
        let corpus = generate_synthetic_corpus(seed, lessons, artifacts, themes).unwrap();
        let dir = tempfile::tempdir().unwrap();
        corpus.save_dir(dir.path()).unwrap();
        prop_assert_eq!(load_corpus_dir(dir.path()).unwrap(), corpus);
    }
}
