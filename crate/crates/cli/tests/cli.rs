use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn morita(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_morita"));
    cmd.args(args).env_remove("MORITA_SEED");
    run(cmd, stdin)
}

fn run(mut cmd: Command, stdin: Option<&[u8]>) -> Output {
    cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).expect("write stdin");
        }
    }
    child.wait_with_output().expect("finished")
}

fn text(out: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
}

#[test]
fn z2_pipeline_is_invertible() {
    let gen = morita(&["gen-vecg", "--group", "Z2"], None);
    assert!(gen.status.success(), "{}", text(&gen));
    let dual = morita(&["compute-dual"], Some(&gen.stdout));
    assert!(dual.status.success(), "{}", text(&dual));
    let check = morita(&["check-invertible"], Some(&dual.stdout));
    assert_eq!(check.status.code(), Some(0), "{}", text(&check));
    assert!(text(&check).contains("invertible"));
}

#[test]
fn missing_irreps_exit_code() {
    let out = morita(&["check-invertible", data("mode1.json").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out).contains("MissingIrreps: FPdim 2 ≠ 1"), "{}", text(&out));
}

#[test]
fn verdict_json_report() {
    let out = morita(&["check-invertible", "--json", data("mode2.json").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["invertible"], false);
    assert_eq!(v["failure_modes"][0]["mode"], "DuplicateLabels");
}

#[test]
fn validate_reports_nonunitary_block() {
    let good = std::fs::read_to_string(data("rep_z2.json")).unwrap();
    let key = "\"1,0,1,0|1,0,1|1,0,1\": [";
    let bad: String = good
        .lines()
        .map(|l| if l.contains(key) { "    \"1,0,1,0|1,0,1|1,0,1\": [-2.0, 0.0]".to_string() } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    assert_ne!(bad, good);
    let out = morita(&["validate"], Some(bad.as_bytes()));
    assert_eq!(out.status.code(), Some(1));
    let t = text(&out);
    assert!(t.contains("f2:1,0,1,0"), "{t}");

    let ok = morita(&["validate"], Some(good.as_bytes()));
    assert_eq!(ok.status.code(), Some(0), "{}", text(&ok));
}

#[test]
fn malformed_json_reports_position() {
    let out = morita(&["validate"], Some(b"{\n  \"format_version\": 1,\n  ]\n}"));
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("line 3, column 3"), "{}", text(&out));
}

#[test]
fn unnormalized_input_is_rejected() {
    let good = std::fs::read_to_string(data("z2.json")).unwrap();
    let bad = good.replacen("\"0,0,0,0|1,0,1|1,0,1\": [1.0,", "\"0,0,0,0|1,0,1|1,0,1\": [0.5,", 1);
    let out = morita(&["validate"], Some(bad.as_bytes()));
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("unit normalization"), "{}", text(&out));
}

#[test]
fn compute_dual_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("morita-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = data("s3.json");
    let mut outputs = Vec::new();
    for k in 0..2 {
        let path = dir.join(format!("out{k}.json"));
        let out = morita(
            &["compute-dual", input.to_str().unwrap(), "-o", path.to_str().unwrap(), "--seed", "1"],
            None,
        );
        assert!(out.status.success(), "{}", text(&out));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let valid = morita(&["validate", dir.join("out0.json").to_str().unwrap()], None);
    assert_eq!(valid.status.code(), Some(0), "{}", text(&valid));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn environment_seed_wins() {
    let input = data("s3.json");
    let with_flag = morita(&["compute-dual", input.to_str().unwrap(), "--seed", "9"], None);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_morita"));
    cmd.args(["compute-dual", input.to_str().unwrap(), "--seed", "1"]).env("MORITA_SEED", "9");
    let with_env = run(cmd, None);
    assert!(with_env.status.success(), "{}", text(&with_env));
    assert_eq!(with_flag.stdout, with_env.stdout);

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_morita"));
    cmd.args(["compute-dual", input.to_str().unwrap()]).env("MORITA_SEED", "nine");
    assert_eq!(run(cmd, None).status.code(), Some(1));
}

#[test]
fn group_and_cocycle_files() {
    let out = morita(
        &[
            "gen-vecg",
            "--group",
            data("group_z2xz2.json").to_str().unwrap(),
            "--cocycle",
            data("cocycle_z2xz2.json").to_str().unwrap(),
        ],
        None,
    );
    assert!(out.status.success(), "{}", text(&out));
    assert_eq!(out.stdout, std::fs::read(data("z2xz2_twisted.json")).unwrap());
    assert_eq!(morita(&["gen-vecg", "--group", "A5"], None).status.code(), Some(1));
}

#[test]
fn verify_wha_and_mpo() {
    let wha = morita(&["verify-wha", data("fib.json").to_str().unwrap()], None);
    assert_eq!(wha.status.code(), Some(0), "{}", text(&wha));
    assert!(text(&wha).contains("dimension 13"));

    let mpo = morita(&["check-mpo", data("rep_z2.json").to_str().unwrap()], None);
    assert_eq!(mpo.status.code(), Some(0), "{}", text(&mpo));
    let mpo = morita(&["check-mpo", "--json", data("mode3.json").to_str().unwrap()], None);
    assert_eq!(mpo.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&mpo.stdout).unwrap();
    assert_eq!(v["agree"], true);
}

#[test]
fn tolerance_flag_applies() {
    let out = morita(&["validate", "--tolerance", "1e-30", data("rep_z2.json").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    let out = morita(&["validate", "--tolerance=-1", data("s3.json").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("positive"));
}
