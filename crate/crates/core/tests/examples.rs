mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use strahler_core::binarize::{binarize, BinarizeMethod};
use strahler_core::conllu::{parse_conllu, scan_corpus, CorpusSource, SentenceOutcome};
use strahler_core::ensembles::{r2_table, r_limit_table};
use strahler_core::limits::{limit_pair, LimitMode};
use strahler_core::shift_reduce::{evaluate, min_stack_depth, TraversalOrder};
use strahler_core::stats::{
    analyze, export_text, histogram_mean_std, resample_r2, AnalysisConfig, StatsError,
};
use strahler_core::tree::{depth, strahler, BinTree, DepTree};

use common::Plane;

pub fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/ud")
}

fn first_tree(path: &Path) -> DepTree {
    let text = fs::read_to_string(path).unwrap();
    match parse_conllu(text.as_bytes()).next().unwrap().unwrap() {
        SentenceOutcome::Tree(s) => s.tree,
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn easy_sentence_binary2_is_three() {
    let t = first_tree(&fixture_root().join("UD_English-Toy/en_toy-ud-train.conllu"));
    assert_eq!(t.len(), 8);
    let b = binarize(&t, &BinarizeMethod::binary2());
    assert_eq!(strahler(&b).get(), 3);
    let limits = limit_pair(&t);
    assert!(limits.lower <= 3 && 3 <= limits.upper);
}

#[test]
fn six_leaf_pair_tree_and_chain_of_pairs() {
    let t: BinTree = "(((a,b),(c,d)),(e,f))".parse().unwrap();
    assert_eq!(strahler(&t).get(), 3);
    let chain: BinTree = "(1,(2,(3,4)))".parse().unwrap();
    assert_eq!(strahler(&chain).get(), 2);
    let left = evaluate(&chain, &TraversalOrder::uniform(&chain, strahler_core::tree::Side::Left)).unwrap();
    let right = evaluate(&chain, &TraversalOrder::uniform(&chain, strahler_core::tree::Side::Right)).unwrap();
    assert_eq!((left.max_depth, right.max_depth), (4, 2));
    assert_eq!(min_stack_depth(&chain, 24).unwrap(), 2);
    assert_eq!(depth(&chain), 4);
}

fn chain(k: usize) -> Plane {
    let mut p = Plane(vec![]);
    for _ in 1..k {
        p = Plane(vec![p]);
    }
    p
}

#[test]
fn six_five_node_plane_trees() {
    let leaf = || Plane(vec![]);
    let cherry = Plane(vec![leaf(), leaf()]);
    let trees = [
        Plane(vec![leaf(), leaf(), chain(2)]),
        Plane(vec![chain(2), leaf(), leaf()]),
        Plane(vec![leaf(), cherry]),
        Plane(vec![leaf(), chain(3)]),
        Plane(vec![Plane(vec![leaf(), chain(2)])]),
        Plane(vec![leaf(), leaf(), leaf(), leaf()]),
    ];
    let mut upper = 0;
    let mut lower = 0;
    for p in &trees {
        assert_eq!(p.size(), 5);
        let l = limit_pair(&p.to_dep_tree());
        upper += l.upper;
        lower += l.lower;
    }
    assert_eq!((upper, lower), (17, 12));
    assert_eq!(format!("{:.2} {:.2}", upper as f64 / 6.0, lower as f64 / 6.0), "2.83 2.00");
}

#[test]
fn five_node_ensemble_means_round_to_two_places() {
    let hi = r_limit_table(5, LimitMode::Max).unwrap();
    let lo = r_limit_table(5, LimitMode::Min).unwrap();
    assert_eq!(format!("{:.2} {:.2}", hi.mean(5).unwrap(), lo.mean(5).unwrap()), "2.71 2.07");
}

#[test]
fn resample_four_leaf_sentences() {
    let table = r2_table(8).unwrap();
    let lengths = BTreeMap::from([(4usize, 1000usize)]);
    let hist = resample_r2(&lengths, &table, 7).unwrap();
    assert_eq!(hist.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
    assert_eq!(hist.values().sum::<usize>(), 1000);
    // Four-leaf trees: 4 of 5 have Strahler 2. Binomial sd is sqrt(1000 * 0.16).
    let twos = hist[&2] as f64;
    assert!((twos - 800.0).abs() <= 3.0 * 160f64.sqrt(), "{hist:?}");
    assert_eq!(resample_r2(&lengths, &table, 7).unwrap(), hist);
    let m = histogram_mean_std(&hist).unwrap();
    assert!((m.mean - 2.2).abs() < 0.04);
}

#[test]
fn resample_rejects_plane_tables() {
    let table = r_limit_table(5, LimitMode::Max).unwrap();
    let err = resample_r2(&BTreeMap::from([(4, 1)]), &table, 0).unwrap_err();
    assert!(matches!(err, StatsError::WrongTable(_)));
}

#[test]
fn scan_finds_nested_corpora_sorted() {
    let corpora = scan_corpus(&fixture_root()).unwrap();
    let names: Vec<&str> = corpora.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["UD_English-Toy", "UD_French-Toy", "UD_Spanish-Toy"]);
    assert_eq!(corpora[0].paths.len(), 2);
    assert_eq!(corpora[0].sentence_count, 7);
    assert_eq!(corpora[1].sentence_count, 3);

    let empty = tempfile::tempdir().unwrap();
    assert!(scan_corpus(empty.path()).unwrap().is_empty());
}

#[test]
fn scan_collects_all_files_of_a_treebank() {
    let dir = tempfile::tempdir().unwrap();
    let tb = dir.path().join("UD_English-ParTUT");
    fs::create_dir(&tb).unwrap();
    for split in ["train", "dev", "test"] {
        fs::write(tb.join(format!("en_partut-ud-{split}.conllu")), "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n\n").unwrap();
    }
    let corpora = scan_corpus(dir.path()).unwrap();
    assert_eq!(corpora.len(), 1);
    assert_eq!(corpora[0].paths.len(), 3);
    assert_eq!(corpora[0].sentence_count, 3);
}

#[test]
fn fixture_analysis_accounts_for_every_record() {
    let corpora = scan_corpus(&fixture_root()).unwrap();
    let analysis = analyze(&corpora, &AnalysisConfig::default()).unwrap();
    assert_eq!(analysis.report.total(), 11);
    assert_eq!(analysis.report.parsed, 9);
    assert_eq!(analysis.report.skip_reasons["MultipleRoots"], 1);
    assert_eq!(analysis.report.skip_reasons["Cycle"], 1);
    assert_eq!(analysis.records.len(), 9);
    assert_eq!(analysis.bracket_violations().count(), 0);
    let again = analyze(&corpora, &AnalysisConfig::default()).unwrap();
    assert_eq!(again.records, analysis.records);
}

#[test]
fn text_export() {
    let dir = tempfile::tempdir().unwrap();
    let tb = dir.path().join("UD_English-Mini");
    fs::create_dir(&tb).unwrap();
    fs::write(
        tb.join("a.conllu"),
        "1\tIt\t_\t_\t_\t_\t2\tnsubj\t_\t_\n2\twas\t_\t_\t_\t_\t3\tcop\t_\t_\n3\teasy\t_\t_\t_\t_\t0\troot\t_\t_\n\n",
    )
    .unwrap();
    let corpus = CorpusSource::from_files("UD_English-Mini", vec![tb.join("a.conllu")]).unwrap();
    let out = dir.path().join("out.txt");
    export_text(&corpus, &out).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), "It was easy\n");

    let wordless = CorpusSource { name: "UD_French-FTB".into(), ..corpus.clone() };
    assert!(matches!(export_text(&wordless, &out), Err(StatsError::WordlessCorpus(_))));

    let empty = CorpusSource::from_files("UD_English-Empty", vec![]).unwrap();
    let out2 = dir.path().join("empty.txt");
    export_text(&empty, &out2).unwrap();
    assert_eq!(fs::read_to_string(&out2).unwrap(), "");
}
