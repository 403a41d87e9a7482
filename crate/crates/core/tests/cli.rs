use std::io::Write;
use std::process::Command;

fn itset(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_itset"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn normalize_dedups_only_on_request() {
    let (code, out, err) = itset(&["normalize", "--dedup", "{{},{}}"]);
    assert_eq!((code, out.as_str()), (0, "{{}}\n"));
    assert!(err.contains("deduplicated under --dedup"));
    let (code, out, err) = itset(&["normalize", "{{},{}}"]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.contains("not set-like"));
}

#[test]
fn normalize_is_idempotent() {
    for lit in ["{{{}},{},{{},{{}}}}", "{ {{},{}} , {} }", "{}"] {
        let (_, once, _) = itset(&["normalize", "--dedup", lit]);
        let (_, twice, _) = itset(&["normalize", "--dedup", once.trim()]);
        assert_eq!(once, twice);
        let (_, m1, _) = itset(&["normalize", "--mset", lit]);
        let (_, m2, _) = itset(&["normalize", "--mset", m1.trim()]);
        assert_eq!(m1, m2);
    }
}

#[test]
fn counts_the_hierarchy() {
    assert_eq!(
        itset(&["enum", "--vsets", "--rank", "3", "--count"]).1,
        "16\n"
    );
    assert_eq!(
        itset(&["enum", "--msets", "--rank", "1", "--width", "2"]).1,
        "{}\n{{}}\n{{},{}}\n"
    );
}

#[test]
fn extensionality_holds_in_small_fragment() {
    let phi =
        "forall x. forall y. ((forall z. (z in x -> z in y) /\\ (z in y -> z in x)) -> x = y)";
    let (code, out, _) = itset(&["eval", "--mode", "tau", "--carrier", "vset:2", phi]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
    let (_, out, _) = itset(&["eval", "--mode", "tau", "--carrier", "mset:1,2", phi]);
    assert_eq!(out, "false\n");
}

#[test]
fn list_carriers_are_read_from_files() {
    let dir = std::env::temp_dir().join(format!("itset-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("carrier.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        "# a multiset with a repeated element\n{{}}\n{{{{}},{{}}}}\n\n{{{{{{}},{{}}}}}}"
    )
    .unwrap();
    let carrier = format!("list:{}", path.display());
    let (code, out, _) = itset(&[
        "eval",
        "--mode",
        "sigma",
        "--carrier",
        &carrier,
        "--let",
        "x={{{},{}}}",
        "--let",
        "z={}",
        "exists y. y in x /\\ z in y",
    ]);
    assert_eq!((code, out.as_str()), (0, "2\n"));
    let (code, out, _) = itset(&["check", "union", "--carrier", &carrier, "--mode", "sigma"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("sigma(condition)=2 tau(condition)=true"),
        "{out}"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_reports_escaping_witnesses() {
    let (code, out, _) = itset(&["check", "pairing", "--carrier", "vset:1", "--mode", "tau"]);
    assert_eq!(code, 0);
    assert!(out.contains("escapes carrier"));
    assert!(out.ends_with("all instances: holds\n"));
    let (code, _, err) = itset(&["check", "choice", "--carrier", "vset:1"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown axiom"));
}

#[test]
fn bisim_setof_and_quotient() {
    assert_eq!(itset(&["bisim", "{{},{}}", "{{}}"]).1, "true\n");
    assert_eq!(itset(&["bisim", "{{}}", "{{{}}}"]).1, "false\n");
    assert_eq!(itset(&["setof", "{{{},{}},{{}}}"]).1, "{{{}}}\n");
    let (_, out, _) = itset(&["quotient", "--rank", "1", "--width", "2"]);
    assert_eq!(
        out,
        "class 0: {} <- [{}]\nclass 1: {{}} <- [{{}}, {{},{}}]\n"
    );
    let (_, json, _) = itset(&["--json", "quotient", "--rank", "1", "--width", "2"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["classes"][1]["members"][1], "{{},{}}");
}

#[test]
fn set_builders() {
    assert_eq!(itset(&["ops", "empty"]).1, "{}\n");
    assert_eq!(itset(&["ops", "nat", "3"]).1, "{{},{{}},{{},{{}}}}\n");
    assert_eq!(itset(&["ops", "pair", "{}", "{{}}"]).1, "{{},{{}}}\n");
    assert_eq!(itset(&["ops", "union", "{{{}},{{{}}}}"]).1, "{{},{{}}}\n");
    assert_eq!(itset(&["ops", "opair", "{}", "{}"]).1, "{{{}}}\n");
    assert_eq!(itset(&["ops", "exp", "{}", "{{}}"]).1, "{{}}\n");
    let (code, _, err) = itset(&[
        "--max-elements",
        "10",
        "ops",
        "exp",
        "{{},{{}},{{{}}}}",
        "{{},{{}},{{{}}}}",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("resource limit"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        itset(&["eval", "--mode", "maybe", "--carrier", "vset:1", "top"]).0,
        2
    );
    assert_eq!(
        itset(&["eval", "--mode", "tau", "--carrier", "tree:1", "top"]).0,
        2
    );
    let (code, _, err) = itset(&["eval", "--mode", "tau", "--carrier", "vset:1", "x in"]);
    assert_eq!(code, 1);
    assert!(err.contains("column 5"), "{err}");
    assert_eq!(
        itset(&[
            "--max-count-digits",
            "2",
            "eval",
            "--mode",
            "sigma",
            "--carrier",
            "vset:2",
            "forall x. exists y. top"
        ])
        .0,
        1
    );
}

#[test]
fn selftest_subset_and_json() {
    let (code, out, _) = itset(&["selftest", "--only", "counts"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS [ 1] counts"));
    assert!(out.ends_with("1/1 criteria passed\n"));
    let (code, out, _) = itset(&["selftest", "--only", "kuratowski", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["criteria"][0]["passed"], true);
}
