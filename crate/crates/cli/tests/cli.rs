use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canontl"))
        .args(args)
        .env_remove("CANONTL_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

#[test]
fn dual_canonical_examples() {
    assert_eq!(ok(&["dcb", "--n", "2", "--label", "+-"]), "+- coeff 1; -+ coeff -q^-1\n");
    assert_eq!(ok(&["dcb", "--n", "2", "--label", "-+"]), "-+ coeff 1\n");
    let all = ok(&["dcb", "--n", "4", "--label", "+-+-", "--method", "all"]);
    assert_eq!(all, "+-+- coeff 1; +--+ coeff -q^-1; -++- coeff -q^-1; -+-+ coeff q^-2\n");
    for method in ["inductive", "explicit", "diagram"] {
        assert_eq!(ok(&["dcb", "--n", "4", "--label", "+-+-", "--method", method]), all);
    }
}

#[test]
fn canonical_example() {
    assert_eq!(ok(&["cb", "--n", "2", "--label", "+-"]), "+- coeff 1; -+ coeff q^-1\n");
}

#[test]
fn kl_word_and_one_line_agree() {
    let a = ok(&["kl", "--n", "3", "--word", "12"]);
    let b = ok(&["kl", "--n", "3", "--word", "1,2"]);
    let c = ok(&["kl", "--n", "3", "--one-line", "2,3,1"]);
    assert_eq!(a, "H[1,2] coeff 1; H[1] coeff -q^-1; H[2] coeff -q^-1; H[] coeff q^-2\n");
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn q_evaluation() {
    let out = ok(&["kl", "--n", "2", "--word", "1", "--q-eval", "2"]);
    assert!(out.contains("H[] = -1/2"), "{out}");
    assert_eq!(run(&["kl", "--n", "2", "--word", "1", "--q-eval", "0"]).status.code(), Some(2));
}

#[test]
fn parabolic_families() {
    let m = ok(&["parabolic", "--n", "2", "--k", "1", "--word", "1", "--which", "M"]);
    assert_eq!(m, "M[1] coeff 1; M[] coeff -q^-1\n");
    for which in ["N", "Q", "R"] {
        ok(&["parabolic", "--n", "3", "--k", "1", "--word", "", "--which", which]);
    }
    // [2] is not a minimal representative for k = 1 in S_3
    assert_eq!(run(&["parabolic", "--n", "3", "--k", "1", "--word", "2", "--which", "M"]).status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    assert_eq!(ok(&["enumerate", "--n", "4"]).lines().count(), 14);
    assert_eq!(ok(&["enumerate", "--n", "4", "--k", "2"]).lines().count(), 6);
    let json: serde_json::Value = serde_json::from_str(&ok(&["enumerate", "--n", "3", "--output", "json"])).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 5);
}

#[test]
fn render_generator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e2.json");
    let e2 = r#"{"m":3,"n":3,"pairs":[["b1","t1"],["b2","b3"],["t2","t3"]]}"#;
    std::fs::write(&path, e2).unwrap();
    let from_file = ok(&["render", "--diagram", &format!("@{}", path.display())]);
    assert_eq!(from_file, ok(&["render", "--diagram", e2]));
    assert!(from_file.starts_with("t o"), "{from_file}");
    let svg = ok(&["render", "--diagram", e2, "--format", "svg"]);
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(run(&["render", "--diagram", "{"]).status.code(), Some(2));
}

#[test]
fn verify_reports_each_case() {
    let out = ok(&["verify", "--suite", "duality", "--n", "4"]);
    assert!(out.contains("PASS duality n=4"), "{out}");
    assert!(out.trim_end().ends_with("PASS duality: 1/1 cases passed"), "{out}");
    let range = ok(&["verify", "--suite", "quantum", "--n", "1..3", "--sequential"]);
    assert!(range.contains("12/12 cases passed"), "{range}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["dcb", "--n", "11", "--label", "+++++------"]).status.code(), Some(2));
    assert_eq!(run(&["--max-n", "4", "dcb", "--n", "5", "--label", "++---"]).status.code(), Some(2));
    assert_eq!(run(&["dcb", "--n", "3", "--label", "+-"]).status.code(), Some(2));
    assert_eq!(run(&["dcb", "--n", "2", "--label", "+x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["kl", "--n", "3", "--word", "9"]).status.code(), Some(2));
    assert_eq!(run(&["cache", "info"]).status.code(), Some(2));
}

#[test]
fn json_output_round_trips() {
    let json = ok(&["dcb", "--n", "4", "--label", "+-+-", "--output", "json"]);
    let v: canontl::spin::SpinVector = serde_json::from_str(&json).unwrap();
    assert_eq!(v, canontl::spin::dcb_inductive(&"+-+-".parse().unwrap()));
    let json = ok(&["kl", "--n", "3", "--word", "121", "--output", "json"]);
    let h: canontl::hecke::HeckeElement = serde_json::from_str(&json).unwrap();
    let w = canontl::Permutation::longest(3);
    assert_eq!(h, canontl::hecke::HeckeAlgebra::new(3).kl_basis(&w).unwrap());
}

fn with_cache(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canontl"))
        .args(args)
        .env("CANONTL_CACHE", cache)
        .output()
        .unwrap()
}

#[test]
fn cache_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("kl.json");
    let query = ["kl", "--n", "4", "--one-line", "4321"];
    let plain = ok(&query);

    let cold = with_cache(&cache, &query);
    assert_eq!(stdout(&cold), plain);
    assert!(cache.exists());
    let warm = with_cache(&cache, &query);
    assert_eq!(stdout(&warm), plain);

    let filled = with_cache(&cache, &["cache", "fill", "--n", "4"]);
    assert!(stdout(&filled).contains("n=4: 24"), "{}", stdout(&filled));
    assert_eq!(stdout(&with_cache(&cache, &query)), plain);
    let spherical = ["verify", "--suite", "spherical", "--n", "4"];
    assert_eq!(stdout(&with_cache(&cache, &spherical)), ok(&spherical));

    std::fs::write(&cache, "{\"4:4,3,2,1\": {\"1,2,3,4\": 7}, \"broken").unwrap();
    let corrupt = with_cache(&cache, &query);
    assert!(corrupt.status.success());
    assert_eq!(stdout(&corrupt), plain);

    let cleared = with_cache(&cache, &["cache", "clear"]);
    assert!(stdout(&cleared).contains("0 elements"));
}

#[test]
fn four_point_examples() {
    assert_eq!(
        ok(&["dcb", "--n", "4", "--label", "++--"]),
        "++-- coeff 1; +-+- coeff -q^-1; -+-+ coeff -q^-1; --++ coeff q^-2\n"
    );
    assert_eq!(ok(&["dcb", "--n", "4", "--label", "--++"]), "--++ coeff 1\n");
}

#[test]
fn all_methods_agree_for_six_points() {
    for bits in 0u32..64 {
        let label: String = (0..6).map(|i| if bits >> i & 1 == 1 { '-' } else { '+' }).collect();
        ok(&["dcb", "--n", "6", "--label", &label, "--method", "all"]);
    }
}

#[test]
fn render_second_generator_of_four_points() {
    let e2 = r#"{"m":4,"n":4,"pairs":[["b1","t1"],["b2","b3"],["t2","t3"],["b4","t4"]]}"#;
    let art = ok(&["render", "--diagram", e2]);
    let expected = "\
t o   o   o   o
  |   +---+   |
  |           |
  |   +---+   |
b o   o   o   o
";
    assert_eq!(art, expected);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["parabolic", "--n", "4", "--k", "2", "--one-line", "3412", "--which", "R", "--output", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
