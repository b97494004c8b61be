use std::path::Path;
use std::process::{Command, Output};

fn scodes(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_scodes"));
    c.args(args).env_remove("SCODES_FACTS").env_remove("SCODES_PACKINGS");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

#[test]
fn bound_examples() {
    let o = scodes(&["bound", "--q", "2", "--n", "9", "--d", "6", "--k", "4", "--dir", "upper"], &[]);
    assert!(o.status.success());
    assert_eq!(first_line(&o), "1156");
    let o = scodes(&["bound", "--q", "2", "--n", "8", "--d", "6", "--k", "4", "--dir", "lower"], &[]);
    assert_eq!(first_line(&o), "257");
    let o = scodes(&["bound", "--q", "2", "--n", "4", "--d", "10", "--k", "2", "--dir", "upper"], &[]);
    assert_eq!(first_line(&o), "1");
}

#[test]
fn explain_cites_facts() {
    let o = scodes(&["bound", "--q", "2", "--n", "14", "--d", "10", "--k", "6", "--explain"], &[]);
    let s = stdout(&o);
    assert!(s.starts_with("67349\n"), "{s}");
    assert!(s.contains("fact_upper"));
    assert!(s.contains("A_2(13,10;5)"));
    let o = scodes(&["bound", "--q", "2", "--n", "14", "--d", "10", "--k", "6", "--no-facts"], &[]);
    assert_ne!(first_line(&o), "67349");
}

#[test]
fn exit_codes() {
    assert_eq!(scodes(&["bound", "--q", "6", "--n", "4", "--d", "4", "--k", "2"], &[]).status.code(), Some(2));
    assert_eq!(scodes(&["bound", "--q", "2"], &[]).status.code(), Some(2));
    assert_eq!(scodes(&["verify", "/nonexistent.scode"], &[]).status.code(), Some(4));
    assert_eq!(scodes(&["construct", "coset", "--packing", "no-such-packing"], &[]).status.code(), Some(4));
    assert_eq!(scodes(&["construct", "lmrd", "--n", "6", "--k", "3", "--d", "5"], &[]).status.code(), Some(2));
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.scode");
    let f = file.to_str().unwrap();
    let o = scodes(&["construct", "linkage", "--q", "2", "--n", "8", "--k", "4", "--d", "6", "-o", f], &[]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("257 words"));
    assert!(stdout(&o).contains("exact"));
    let o = scodes(&["verify", f, "--expect-d", "6"], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("257 words"));
    let o = scodes(&["verify", f, "--expect-d", "8"], &[]);
    assert_eq!(o.status.code(), Some(3));
    let o = scodes(&["verify", f, "--sample", "500", "--seed", "7"], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sampled, 500 pairs, seed 7"));
}

#[test]
fn corrupted_code_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.scode");
    // Two lines meeting in the point 1100.
    let text = "SCODE 1\nq=2 p=2 e=1 n=4 k=2 d=4 count=2\n1 1 0 0\n0 0 1 0\n\n1 1 0 0\n0 0 0 1\n";
    std::fs::write(&file, text).unwrap();
    let o = scodes(&["verify", file.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::write(&file, text.replace("count=2", "count=3")).unwrap();
    assert_eq!(scodes(&["verify", file.to_str().unwrap()], &[]).status.code(), Some(4));
}

#[test]
fn every_recipe_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.scode");
    let out = out.to_str().unwrap();
    let cases: &[(&[&str], &str)] = &[
        (&["lmrd", "--n", "7", "--k", "3", "--d", "4"], "256 words"),
        (&["improved-linkage", "--n", "7", "--k", "3", "--d", "4"], "265 words"),
        (&["gen-linkage", "--n", "6", "--k", "3", "--d", "4"], "words"),
        (&["ef", "--n", "7", "--k", "3", "--d", "6", "--skeleton", "1110000,0001101"], "17 words"),
        (&["spread", "--q", "3", "--n", "6", "--k", "2"], "91 words"),
        (&["coset", "--packing", "parallelism-4-2", "--d", "4"], "700 words"),
        (&["insert1", "--widths", "2,2,2,2", "--k1", "2", "--k2", "2", "--d1", "2", "--d2", "2"], "64 words"),
        (&["insert2", "--widths", "2,2,2,2", "--k1", "2", "--k2", "2", "--d", "4"], "7 words"),
    ];
    for (args, want) in cases {
        let mut full = vec!["construct"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["-o", out]);
        let o = scodes(&full, &[]);
        assert!(o.status.success(), "{args:?}: {o:?}");
        assert!(stdout(&o).contains(want), "{args:?}: {}", stdout(&o));
        assert!(scodes(&["verify", out], &[]).status.success());
    }
}

#[test]
fn assemble_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.scode");
    let b = dir.path().join("b.scode");
    let c = dir.path().join("c.scode");
    assert!(scodes(&["construct", "lmrd", "--n", "7", "--k", "3", "--d", "4", "-o", a.to_str().unwrap()], &[]).status.success());
    std::fs::write(&b, "SCODE 1\nq=2 p=2 e=1 n=7 k=3 d=4 count=1\n0 0 0 0 1 0 0\n0 0 0 0 0 1 0\n0 0 0 0 0 0 1\n").unwrap();
    let o = scodes(
        &["construct", "assemble", "--from", a.to_str().unwrap(), "--from", b.to_str().unwrap(), "-o", c.to_str().unwrap()],
        &[],
    );
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("257 words"));
    // The lifted MRD code twice clashes: every word repeats.
    let o = scodes(&["construct", "assemble", "--from", a.to_str().unwrap(), "--from", a.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table_row_for_nine_four_three() {
    let o = scodes(&["table", "--q", "2", "--n-max", "9", "--d", "4", "--format", "md"], &[]);
    assert!(o.status.success());
    let s = stdout(&o);
    let row = s.lines().find(|l| l.starts_with("| 9 | 3 |")).unwrap();
    assert!(row.contains("| 5986 ["), "{row}");
    assert!(s.contains("fact_lower: Braun"));
    let o = scodes(&["table", "--q", "2", "--n-max", "8", "--d", "6", "--format", "csv"], &[]);
    let s = stdout(&o);
    assert!(s.starts_with("q,n,d,k,lower,lower_note,upper,upper_note\n"));
    assert!(s.lines().any(|l| l.starts_with("2,8,6,4,257,")));
}

#[test]
fn expand_and_sharpfloor() {
    let o = scodes(&["expand", "--value", "137", "--q", "3", "--r", "3"], &[]);
    let s = stdout(&o);
    let coeffs = s.lines().find(|l| l.starts_with("coefficients")).unwrap();
    assert!(coeffs.ends_with(" -2"), "{coeffs}");
    assert!(s.contains("realizable no"));
    let o = scodes(&["expand", "--value", "-5", "--q", "2", "--r", "1"], &[]);
    assert!(o.status.success());
    let o = scodes(&["sharpfloor", "--a", "17374", "--b", "15", "--q", "2", "--r", "3"], &[]);
    assert_eq!(first_line(&o), "1156");
    let o = scodes(&["sharpfloor", "--a", "1", "--b", "0", "--q", "2", "--r", "3"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn facts_override() {
    let dir = tempfile::tempdir().unwrap();
    let facts = dir.path().join("facts.tsv");
    std::fs::write(&facts, "q\tn\td\tk\tkind\tvalue\tcitation\n2\t7\t4\t3\tlower\t340\tinvented for a test\n").unwrap();
    let o = scodes(&["bound", "--q", "2", "--n", "7", "--d", "4", "--k", "3", "--dir", "lower"], &[("SCODES_FACTS", &facts)]);
    assert_eq!(first_line(&o), "340");
    // 400 exceeds the upper bound 381.
    std::fs::write(&facts, "2\t7\t4\t3\tlower\t400\tinvented\n").unwrap();
    let o = scodes(&["bound", "--q", "2", "--n", "7", "--d", "4", "--k", "3", "--dir", "lower"], &[("SCODES_FACTS", &facts)]);
    assert_eq!(o.status.code(), Some(4));
    std::fs::write(&facts, "2\t7\tfour\t3\tlower\t1\tx\n").unwrap();
    let o = scodes(&["bound", "--q", "2", "--n", "7", "--d", "4", "--k", "3"], &[("SCODES_FACTS", &facts)]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn packings_directory() {
    let dir = tempfile::tempdir().unwrap();
    // A two-part packing of lines in F_2^4: two disjoint partial spreads.
    let text = "SCODE 1\nq=2 p=2 e=1 n=4 k=2 d=4 count=4 outer=2\npart=0\n1 0 0 0\n0 1 0 0\n\n0 0 1 0\n0 0 0 1\n\npart=1\n1 0 1 0\n0 1 0 1\n\n1 0 0 1\n0 1 1 1\n";
    std::fs::write(dir.path().join("two.scode"), text).unwrap();
    std::fs::write(dir.path().join("mine.table"), "11000,00110 | q^2\n").unwrap();
    let env = [("SCODES_PACKINGS", dir.path())];
    let o = scodes(&["construct", "coset", "--packing", "two", "--d", "4"], &env);
    assert!(o.status.success(), "{o:?}");
    // 4 * (2*2 + 2*2) words.
    assert!(String::from_utf8_lossy(&o.stderr).contains("32 words"));
    let o = scodes(&["construct", "coset", "--packing", "mine", "--d", "4"], &env);
    assert!(o.status.success(), "{o:?}");
    std::fs::write(dir.path().join("two.scode"), text.replace("part=1", "part=5")).unwrap();
    assert_eq!(scodes(&["construct", "coset", "--packing", "two"], &env).status.code(), Some(4));
}
