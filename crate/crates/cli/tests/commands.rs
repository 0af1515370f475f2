use serde_json::Value;
use std::process::{Command, Output};

fn blaschke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blaschke")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("blaschke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn render_dyn_writes_image_and_metadata() {
    let (ppm, meta) = (scratch("dyn.ppm"), scratch("dyn.json"));
    let out = blaschke(&[
        "render-dyn", "--a", "0.5i", "--lambda", "-1.9e-6+3.15e-5i", "--center", "0", "--width", "3",
        "--res", "64", "--out", ppm.to_str().unwrap(), "--meta", meta.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let image = std::fs::read(&ppm).unwrap();
    assert!(image.starts_with(b"P6\n64 64\n255\n"));
    let m: Value = serde_json::from_slice(&std::fs::read(&meta).unwrap()).unwrap();
    assert_eq!(m["spec"]["resolution"], 64);
    let summary = stdout_json(&out);
    assert_eq!(summary["provenance"]["params"]["lambda"][0], -1.9e-6);
    assert!(summary["provenance"]["engine"].as_str().unwrap().starts_with("blaschke-core"));
}

#[test]
fn classify_prints_fate() {
    let out = blaschke(&["classify", "--a", "0.5i", "--lambda", "1e-6", "--z", "0.2+0.1i"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["kind"].is_string());
    assert!(v["label"].is_string());
    assert_eq!(v["provenance"]["params"]["z"], serde_json::json!([0.2, 0.1]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(blaschke(&["classify", "--a", "0.5i"]).status.code(), Some(2));
    assert_eq!(blaschke(&["classify", "--a", "0.5q", "--lambda", "1e-6", "--z", "0"]).status.code(), Some(2));
    assert_eq!(blaschke(&["no-such-command"]).status.code(), Some(2));
    // λ = 0 is outside the perturbed family.
    assert_eq!(blaschke(&["classify", "--a", "0.5i", "--lambda", "0", "--z", "0.1"]).status.code(), Some(2));
}

#[test]
fn failed_precondition_exits_one() {
    let out = blaschke(&["classify", "--a", "0.5", "--lambda", "1e-4", "--z", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn verify_only_is_deterministic_and_skips_unknown() {
    let out = blaschke(&["verify", "--only", "vieta,missing", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["provenance"]["seed"], 7);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results[0]["status"], "pass");
    assert_eq!(results[1]["status"], "skipped");
    let again = blaschke(&["verify", "--only", "vieta,missing", "--seed", "7"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn environment_port_overrides_flag() {
    use blaschke_cli::cli::resolve_port;
    assert_eq!(resolve_port(8080, None).unwrap(), 8080);
    assert_eq!(resolve_port(8080, Some("9191")).unwrap(), 9191);
    assert!(resolve_port(8080, Some("http")).is_err());
}

#[test]
fn serve_answers_health_on_the_environment_port() {
    use std::io::{Read, Write};
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = Command::new(env!("CARGO_BIN_EXE_blaschke"))
        .args(["serve", "--port", "1"])
        .env("BLASCHKE_PORT", port.to_string())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    let mut reply = String::new();
    for _ in 0..100 {
        if let Ok(mut s) = std::net::TcpStream::connect(("127.0.0.1", port)) {
            s.write_all(b"GET /api/v1/health HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").unwrap();
            s.read_to_string(&mut reply).unwrap();
            break;
        }
        std::thread::sleep(std::time::Duration::from_millis(50));
    }
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(reply.starts_with("HTTP/1.1 200"), "{reply}");
    assert!(reply.ends_with("ok"), "{reply}");
}
