use std::path::Path;
use std::process::{Command, Output};
use std::time::Duration;

fn lalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lalg"))
        .args(args)
        .env_remove("LALG_JOBS")
        .output()
        .expect("run lalg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    for (args, flag) in [
        (&["enumerate", "--size", "4", "--class", "bogus"][..], "--class"),
        (&["enumerate", "--size", "0"], "--size"),
        (&["enumerate", "--size", "4", "--jobs", "0"], "--jobs"),
        (&["enumerate", "--size", "4", "--mode", "fast"], "--mode"),
        (&["enumerate", "--class", "all"], "--size"),
        (&["young", "--points", "0"], "--points"),
        (&["posets", "--size", "3", "--exclude", "chain"], "--exclude"),
        (&["linear", "--size", "x"], "--size"),
        (&["enumerate", "--size", "3", "--bogus"], "--bogus"),
    ] {
        let o = lalg(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn verify_reports_the_failing_condition() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("db.txt");
    std::fs::write(&f, "3:3 2 3 1 3 3 1 2 3\n2:1 2 1 2\n2:2 1 1 2\n").unwrap();
    let o = lalg(&["verify", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "line 2: condition 3 fails at (1)\nline 3: condition 2 fails at (1)\n1 valid, 2 invalid\n"
    );

    std::fs::write(&f, "3:3 2 3 1 3 3 1 2 3\n").unwrap();
    let o = lalg(&["verify", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn missing_files_fail_with_status_1() {
    let o = lalg(&["count", "/nonexistent/db.txt", "--class", "all"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn database_commands_agree_with_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db5.txt");
    assert!(lalg(&["enumerate", "--size", "5", "--out", s(&db)]).status.success());
    assert!(!dir.path().join("db5.txt.progress").exists());

    let count = |class: &str| stdout(&lalg(&["count", s(&db), "--class", class])).trim().to_string();
    assert_eq!(count("all"), "632");
    assert_eq!(count("hilbert"), "21");
    assert_eq!(count("linear"), "15");
    assert_eq!(count("discrete"), "101");

    let hil = dir.path().join("hilbert.txt");
    assert!(lalg(&["filter", s(&db), "--class", "hilbert", "--out", s(&hil)]).status.success());
    let direct = stdout(&lalg(&["enumerate", "--size", "5", "--class", "hilbert", "--mode", "general"]));
    let canon = |p: &Path| {
        let mut v: Vec<String> = stdout(&lalg(&["canonical", s(p)])).lines().map(String::from).collect();
        v.sort();
        v
    };
    let gen = dir.path().join("general.txt");
    std::fs::write(&gen, direct).unwrap();
    assert_eq!(canon(&hil), canon(&gen));

    // canonical forms of the database collapse nothing; a doubled file halves
    let doubled = dir.path().join("doubled.txt");
    let text = std::fs::read_to_string(&db).unwrap();
    std::fs::write(&doubled, format!("{text}{}", stdout(&lalg(&["canonical", s(&db)])))).unwrap();
    let dedup = dir.path().join("dedup.txt");
    assert!(lalg(&["dedup", s(&doubled), "--out", s(&dedup)]).status.success());
    assert_eq!(std::fs::read_to_string(&dedup).unwrap(), text);
}

#[test]
fn small_commands() {
    assert_eq!(stdout(&lalg(&["bell", "0"])), "1\n");
    assert_eq!(stdout(&lalg(&["bell", "25"])), "4638590332229999353\n");
    assert_eq!(stdout(&lalg(&["posets", "--size", "4", "--count"])), "16\n");
    assert_eq!(
        stdout(&lalg(&["posets", "--size", "4", "--exclude", "antichain,diamond", "--count"])),
        "14\n"
    );
    assert_eq!(stdout(&lalg(&["linear", "--size", "6"])).lines().count(), 52);
    assert_eq!(stdout(&lalg(&["young", "--points", "1"])), "1\n\n");
    assert_eq!(stdout(&lalg(&["enumerate", "--size", "6", "--count"])), "15582\n");
}

#[test]
fn job_files_reproduce_the_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = dir.path().join("cases.txt");
    assert!(lalg(&["cases", "--size", "5", "--out", s(&jobs)]).status.success());
    let via_jobs = lalg(&["enumerate", "--cases", s(&jobs)]);
    assert_eq!(stdout(&via_jobs), stdout(&lalg(&["enumerate", "--size", "5"])));
    let wrong = lalg(&["enumerate", "--cases", s(&jobs), "--size", "6"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn interrupted_runs_resume() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h8.txt");
    let progress = dir.path().join("h8.txt.progress");
    let args = ["enumerate", "--size", "8", "--class", "hilbert", "--jobs", "1", "--out", s(&out)];

    let mut child = Command::new(env!("CARGO_BIN_EXE_lalg")).args(args).spawn().unwrap();
    // stop it part way through, once some cases are on disk
    loop {
        if let Some(status) = child.try_wait().unwrap() {
            assert!(status.success());
            break;
        }
        let done: usize = std::fs::read_to_string(&progress)
            .ok()
            .and_then(|t| t.split_whitespace().nth(1).and_then(|d| d.parse().ok()))
            .unwrap_or(0);
        if done >= 100 {
            child.kill().unwrap();
            child.wait().unwrap();
            assert!(progress.exists());
            break;
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    assert!(lalg(&args).status.success());
    assert!(!progress.exists());
    let fresh = lalg(&["enumerate", "--size", "8", "--class", "hilbert", "--jobs", "1"]);
    assert_eq!(std::fs::read(&out).unwrap(), fresh.stdout);
    assert_eq!(fresh.stdout.iter().filter(|&&b| b == b'\n').count(), 4036);

    // a checkpoint from different arguments is refused
    std::fs::write(&progress, "0123456789abcdef 3 10\n").unwrap();
    assert_eq!(lalg(&args).status.code(), Some(1));
}
