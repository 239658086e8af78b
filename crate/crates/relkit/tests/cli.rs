use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use relkit::Session;
use relkit_core::Limits;

const SHIM: &str = "answer(PN, C) :- suppliers(sid: S, sname: _, city: C), \
    parts(pid: P, pname: PN, sid: S, pqty: Q1), projects(rid: _, pid: P, rqty: Q2), \
    leq(rqty: Q2, pqty: Q1).";
const GRANDPARENT: &str = "answer(x, z) :- pc(x, y), pc(y, z).";

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn relkit(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relkit"));
    cmd.args(args)
        .env_remove("RELKIT_LIMIT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn db(name: &str) -> [String; 4] {
    let dir = fixture(name);
    [
        "-s".into(),
        dir.join("schema.rel").display().to_string(),
        "-d".into(),
        dir.display().to_string(),
    ]
}

fn run(cmd: &str, fixture: &str, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec![cmd.into()];
    args.extend(db(fixture));
    args.extend(extra.iter().map(|s| s.to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    relkit(&args, None, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn load_reports_sizes() {
    let o = run("load", "cities_parts", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "parts: 3 tuples\nprojects: 3 tuples\nsuppliers: 3 tuples\n"
    );
    let o = run("load", "cities_parts", &["--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn shim_in_taos() {
    let o = run("query", "cities_parts", &["-e", SHIM]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "   PN |    C \n------+------\n shim | taos \n(1 row)\n"
    );
    let o = run("query", "cities_parts", &["-e", SHIM, "--format", "csv"]);
    assert_eq!(stdout(&o), "PN,C\nshim,taos\n");
}

#[test]
fn grandparent() {
    let o = run(
        "query",
        "parent_child",
        &["-e", GRANDPARENT, "--format", "tsv"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x\tz\nmary\talan\n");
}

#[test]
fn malformed_rule_exits_1_with_position() {
    let o = run(
        "query",
        "parent_child",
        &["-e", "answer(x, z) :- pc(x, y) pc(y, z)."],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("1:26"), "{}", stderr(&o));
    let o = run(
        "query",
        "parent_child",
        &["-e", "answer(x) :- pc(x, y, z)."],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at 1:14"), "{}", stderr(&o));
}

#[test]
fn explain_places_leq_after_its_bindings() {
    let o = run("explain", "cities_parts", &["-e", SHIM]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let leq = text.find("test leq").unwrap();
    assert!(text.find("projects(").unwrap() < leq);
    assert!(text.find("parts(pid").unwrap() < leq);
    assert_eq!(text, stdout(&run("explain", "cities_parts", &["-e", SHIM])));

    let o = run("explain", "parent_child", &["-e", GRANDPARENT]);
    let text = stdout(&o);
    assert!(text.contains("π[x, z](pc:⟨x, y⟩ ⋈ pc:⟨y, z⟩)"));
    assert!(text.trim_end().ends_with("project onto x, z"));
    assert!(!text.contains("test"));
}

#[test]
fn unsafe_rule_names_the_variable() {
    let o = run(
        "explain",
        "cities_parts",
        &[
            "-e",
            "answer(S) :- suppliers(sid: S, sname: N, city: C), leq(rqty: x, pqty: y).",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("unsafe rule: variable x"),
        "{}",
        stderr(&o)
    );
}

fn copy_fixture(name: &str, to: &Path) {
    for entry in fs::read_dir(fixture(name)).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
    }
}

#[test]
fn bad_row_exits_2_citing_the_line() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixture("cities_parts", dir.path());
    fs::write(
        dir.path().join("parts.csv"),
        "pid,pname,sid,pqty\n213,hose,322,13\n214,tube,321,six\n",
    )
    .unwrap();
    let o = relkit(
        &[
            "load",
            "-s",
            &dir.path().join("schema.rel").display().to_string(),
            "-d",
            &dir.path().display().to_string(),
        ],
        None,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("parts.csv:3"), "{err}");
    assert!(err.contains("pqty"), "{err}");
}

#[test]
fn key_violation_and_missing_file_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixture("cities_parts", dir.path());
    let schema = dir.path().join("schema.rel").display().to_string();
    let data = dir.path().display().to_string();
    fs::write(
        dir.path().join("suppliers.csv"),
        "sid,sname,city\n321,lee,tulsa\n321,ray,tulsa\n",
    )
    .unwrap();
    let o = relkit(&["load", "-s", &schema, "-d", &data], None, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("suppliers.csv:3"));
    fs::remove_file(dir.path().join("suppliers.csv")).unwrap();
    let o = relkit(&["load", "-s", &schema, "-d", &data], None, &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn permuted_columns_load_identically() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixture("cities_parts", dir.path());
    fs::write(
        dir.path().join("parts.csv"),
        "pqty,sid,pid,pname\n18,322,215,shim\n13,322,213,hose\n6,321,214,tube\n",
    )
    .unwrap();
    let a = Session::load(
        &fixture("cities_parts").join("schema.rel"),
        &fixture("cities_parts"),
        Limits::default(),
    )
    .unwrap();
    let b = Session::load(
        &dir.path().join("schema.rel"),
        dir.path(),
        Limits::default(),
    )
    .unwrap();
    assert_eq!(
        a.instance().relation("parts"),
        b.instance().relation("parts")
    );
    assert_eq!(a.instance(), b.instance());
}

#[test]
fn repl_matches_batch_byte_for_byte() {
    for (fixture_name, rule) in [("parent_child", GRANDPARENT), ("cities_parts", SHIM)] {
        let batch = run("query", fixture_name, &["-e", rule]);
        let mut args = vec!["repl".to_string()];
        args.extend(db(fixture_name));
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let repl = relkit(&args, Some(&format!("{rule}\n.quit\n")), &[]);
        assert_eq!(repl.status.code(), Some(0));
        assert_eq!(repl.stdout, batch.stdout);
    }
}

#[test]
fn repl_commands() {
    let mut args = vec!["repl".to_string()];
    args.extend(db("cities_parts"));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = relkit(
        &args,
        Some(".relations\nnot a rule\n.quit\n.relations\n"),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "parts(pid, pname, sid, pqty)  3 tuples\n\
         projects(rid, pid, rqty)  3 tuples\n\
         suppliers(sid, sname, city)  3 tuples\n\
         eq/2  built-in\n\
         leq/2  built-in\n"
    );
    assert!(stderr(&o).starts_with("error: parse error"));
}

#[test]
fn limit_from_environment() {
    let mut args = vec!["query".to_string()];
    args.extend(db("parent_child"));
    args.extend(["-e".into(), "answer(x, z) :- pc(x, y), pc(u, z).".into()]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = relkit(&args, None, &[("RELKIT_LIMIT", "5")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("limit"), "{}", stderr(&o));
    assert_eq!(
        relkit(&args, None, &[("RELKIT_LIMIT", "9")]).status.code(),
        Some(0)
    );
    assert_eq!(
        relkit(&args, None, &[("RELKIT_LIMIT", "lots")])
            .status
            .code(),
        Some(2)
    );
}
