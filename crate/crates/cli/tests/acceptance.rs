//! Exit criteria, run against the built binary. Every check is exact; the
//! wall-clock limits are fixed below. Prints one line per criterion and fails
//! if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hodge_wres::curvature::CurvaturePoint;
use hodge_wres::dsl::random::{endo_text, first_order_text, second_order_text, zeroth_order_text};
use hodge_wres::functionals::Variant;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_hodge-wres");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
    json: Value,
    elapsed: Duration,
}

fn hodge_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let start = Instant::now();
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    Run {
        code: out.status.code().unwrap_or(-1),
        json: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        elapsed: start.elapsed(),
    }
}

fn hodge(args: &[&str]) -> Run {
    hodge_env(args, &[])
}

fn reports(run: &Run) -> Vec<&Value> {
    run.json["reports"].as_array().map(|a| a.iter().collect()).unwrap_or_default()
}

fn named<'a>(run: &'a Run, name: &str) -> Vec<&'a Value> {
    reports(run).into_iter().filter(|r| r["name"] == name).collect()
}

fn matched(r: &Value) -> bool {
    r["match"] == true
}

fn lhs_is_zero(r: &Value) -> bool {
    r["lhs"]["num"] == "0" && r["lhs"].get("im_num").is_none()
}

fn detail<'a>(r: &'a Value, label: &str) -> Option<&'a str> {
    r["details"].as_array()?.iter().find(|d| d["label"] == label)?["value"].as_str()
}

fn all_ok(run: &Run) -> bool {
    run.code == 0 && run.json["all_match"] == true
}

struct Verdict {
    pass: bool,
    note: String,
}

fn timed(pass: bool, elapsed: Duration, limit: Option<Duration>, note: String) -> Verdict {
    let (within, timing) = match limit {
        Some(l) => (elapsed <= l, format!("{:.1} s, limit {} s", elapsed.as_secs_f64(), l.as_secs())),
        None => (true, format!("{:.1} s", elapsed.as_secs_f64())),
    };
    Verdict { pass: pass && within, note: format!("{note} ({timing})") }
}

fn algebra() -> Verdict {
    let mut elapsed = Duration::ZERO;
    let mut pass = true;
    let mut counts = Vec::new();
    for n in ["2", "4", "6", "8"] {
        let r = hodge(&["check-algebra", "--dim", n, "--output", "json"]);
        elapsed += r.elapsed;
        let rs = reports(&r);
        pass &= all_ok(&r) && !rs.is_empty();
        counts.push(format!("n={n}: {} relations", rs.len()));
    }
    timed(pass, elapsed, Some(Duration::from_secs(10)), counts.join(", "))
}

fn traces() -> Verdict {
    let mut elapsed = Duration::ZERO;
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, trials) in [("4", "50"), ("6", "10")] {
        let r = hodge(&["check-traces", "--dim", n, "--trials", trials, "--output", "json"]);
        elapsed += r.elapsed;
        let sampled = reports(&r).into_iter().filter(|x| detail(x, "curvature samples") == Some(trials)).count();
        pass &= all_ok(&r) && sampled > 0;
        notes.push(format!("n={n}: {} identities, {sampled} over {trials} curvatures", reports(&r).len()));
    }
    timed(pass, elapsed, Some(Duration::from_secs(60)), notes.join(", "))
}

fn symbols() -> Verdict {
    let r = hodge(&["check-symbols", "--dim", "4", "--trials", "10", "--output", "json"]);
    let per_trial = named(&r, "σ(D)∘σ(D) equals the stated symbols of D²");
    let pass = all_ok(&r) && per_trial.len() == 10 && per_trial.iter().all(|x| matched(x));
    timed(pass, r.elapsed, Some(Duration::from_secs(60)), format!("{} curvatures, all three levels", per_trial.len()))
}

fn inverse() -> Verdict {
    let trials = 10;
    let r = hodge(&["check-inverse", "--dim", "4", "--trials", "10", "--output", "json"]);
    let powers = named(&r, "closed-form σ(D^{-2k}) equals k-fold parametrix");
    let mut pass = all_ok(&r);
    for k in ["1", "2", "3"] {
        let with_k: Vec<_> = powers.iter().filter(|x| x["inputs"]["k"] == k).collect();
        pass &= with_k.len() == trials && with_k.iter().all(|x| matched(x));
    }
    timed(pass, r.elapsed, Some(Duration::from_secs(120)), format!("k=1,2,3 over {trials} curvatures"))
}

fn metric() -> Verdict {
    let mut elapsed = Duration::ZERO;
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, trials) in [("4", 20), ("6", 5)] {
        let r = hodge(&["metric", "--dim", n, "--trials", &trials.to_string(), "--output", "json"]);
        elapsed += r.elapsed;
        let m = named(&r, "metric");
        pass &= all_ok(&r) && m.len() == trials && m.iter().all(|x| matched(x));
        notes.push(format!("n={n}: {}/{trials} triples", m.iter().filter(|x| matched(x)).count()));
    }
    timed(pass, elapsed, Some(Duration::from_secs(120)), notes.join(", "))
}

fn einstein() -> Verdict {
    let mut elapsed = Duration::ZERO;
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, trials) in [("4", 20), ("6", 5)] {
        let r = hodge(&["einstein", "--dim", n, "--trials", &trials.to_string(), "--output", "json"]);
        elapsed += r.elapsed;
        let e = named(&r, "einstein");
        let both_routes = e.iter().filter(|x| matched(x) && detail(x, "routes agree") == Some("true")).count();
        let c = named(&r, "cancellation");
        let cancelled = c.iter().filter(|x| matched(x) && lhs_is_zero(x)).count();
        pass &= all_ok(&r) && both_routes == trials && cancelled == trials;
        notes.push(format!("n={n}: {both_routes}/{trials} both routes, {cancelled}/{trials} cancellations"));
    }
    timed(pass, elapsed, Some(Duration::from_secs(300)), notes.join(", "))
}

fn random_form(rng: &mut impl Rng, n: usize) -> String {
    (0..n).map(|_| rng.gen_range(-4..=4).to_string()).collect::<Vec<_>>().join(",")
}

fn lemmas() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut tally = Vec::new();
    let mut pass = true;
    let mut corrected = 0;
    for (label, variant, flag) in [
        ("E (γγ)", Variant::Gamma, "gamma"),
        ("Ẽ (λ₊λ₋)", Variant::Lambda, "lambda"),
        ("F (γγ)", Variant::Gamma, "gamma"),
        ("F̃ (λ₊λ₋)", Variant::Lambda, "lambda"),
    ] {
        let mut ok = 0;
        for seed in 0..10 {
            let u = format!("--u={}", random_form(&mut rng, 4));
            let w = format!("--w={}", random_form(&mut rng, 4));
            let seed = format!("--seed={seed}");
            let mut args = vec!["functional".to_string(), "--dim=4".into(), seed, u, w, format!("--variant={flag}")];
            if label.starts_with('F') {
                args.push(format!("--f={}", second_order_text(&mut rng, variant)));
                if rng.gen_bool(0.5) {
                    args.push(format!("--g={}", first_order_text(&mut rng)));
                }
                if rng.gen_bool(0.5) {
                    args.push(format!("--h={}", zeroth_order_text(&mut rng)));
                }
            } else {
                args.push(format!("--expr={}", endo_text(&mut rng, variant)));
            }
            args.push("--output=json".into());
            let r = hodge(&args.iter().map(String::as_str).collect::<Vec<_>>());
            let rep = reports(&r);
            if r.code == 0 && rep.len() == 1 && matched(rep[0]) {
                ok += 1;
            }
            if rep.first().and_then(|x| detail(x, "matches value including ½e²_pp")) == Some("true") {
                corrected += 1;
            }
        }
        pass &= ok == 10;
        tally.push(format!("{label} {ok}/10"));
    }
    let note = format!("{}; Ẽ against value with ½ẽ²_pp term: {corrected}/10", tally.join(", "));
    timed(pass, start.elapsed(), None, note)
}

fn closedness() -> Verdict {
    let mut elapsed = Duration::ZERO;
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, trials) in [("4", 50), ("6", 10)] {
        let r = hodge(&["closedness", "--dim", n, "--trials", &trials.to_string(), "--output", "json"]);
        elapsed += r.elapsed;
        let zeros = named(&r, "closedness").into_iter().filter(|x| lhs_is_zero(x)).count();
        pass &= all_ok(&r) && zeros == trials;
        notes.push(format!("n={n}: {zeros}/{trials} zero densities"));
    }
    timed(pass, elapsed, None, notes.join(", "))
}

fn determinism() -> Verdict {
    let args = ["all", "--dim", "4", "--seed", "7", "--output", "json"];
    let a = hodge(&args);
    let b = hodge_env(&args, &[("HODGE_WRES_THREADS", "1")]);
    let same = !a.stdout.is_empty() && a.stdout == b.stdout && a.code == b.code;
    let note = format!("{} bytes, {} reports, identical: {same}", a.stdout.len(), reports(&a).len());
    timed(same, a.elapsed + b.elapsed, None, note)
}

fn write_curvature(dir: &Path, name: &str, curv: &CurvaturePoint) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&curv.to_json()).unwrap()).unwrap();
    path.display().to_string()
}

fn degenerate() -> Verdict {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let flat = write_curvature(dir.path(), "flat.json", &CurvaturePoint::flat(4).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut notes = Vec::new();
    let mut pass = true;
    for _ in 0..5 {
        let u = format!("--u={}", random_form(&mut rng, 4));
        let w = format!("--w={}", random_form(&mut rng, 4));
        let e = hodge(&["einstein", "--curvature", &flat, &u, &w, "--output=json"]);
        let e_ok = all_ok(&e) && lhs_is_zero(reports(&e)[0]);

        let mut lemma_ok = true;
        for (variant, flag) in [(Variant::Gamma, "gamma"), (Variant::Lambda, "lambda")] {
            let expr = format!("--expr={}", endo_text(&mut rng, variant));
            let l = hodge(&["functional", "--curvature", &flat, &u, &w, &expr, "--variant", flag, "--output=json"]);
            lemma_ok &= l.code == 0 && reports(&l).first().is_some_and(|x| lhs_is_zero(x));
        }

        let flat_metric = hodge(&["metric", "--curvature", &flat, &u, &w, "--output=json"]);
        let curved_metric = hodge(&["metric", "--seed", "3", &u, &w, "--output=json"]);
        let metric_ok = all_ok(&flat_metric)
            && all_ok(&curved_metric)
            && reports(&flat_metric)[0]["lhs"] == reports(&curved_metric)[0]["lhs"];
        pass &= e_ok && lemma_ok && metric_ok;
        notes.push(format!("{}{}{}", u8::from(e_ok), u8::from(lemma_ok), u8::from(metric_ok)));
    }
    let note = format!("einstein/lemma/metric per sample: {}", notes.join(" "));
    timed(pass, start.elapsed(), None, note)
}

fn exit_codes() -> Verdict {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let good = write_curvature(dir.path(), "good.json", &CurvaturePoint::flat(4).unwrap());
    let truncated = dir.path().join("truncated.json");
    let text = std::fs::read_to_string(&good).unwrap();
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let mut asym = CurvaturePoint::flat(4).unwrap().to_json();
    asym.riemann[0][1][0][1] = "1".into();
    let asym_path = dir.path().join("asymmetric.json");
    std::fs::write(&asym_path, serde_json::to_string(&asym).unwrap()).unwrap();
    let (truncated, asym_path) = (truncated.display().to_string(), asym_path.display().to_string());

    let cases: Vec<(&str, Vec<&str>, i32)> = vec![
        ("valid file", vec!["metric", "--curvature", &good, "--trials", "1"], 0),
        ("truncated file", vec!["metric", "--curvature", &truncated], 2),
        ("asymmetric tensor", vec!["einstein", "--curvature", &asym_path], 2),
        ("missing file", vec!["metric", "--curvature", "/nonexistent/curvature.json"], 2),
        ("odd dimension", vec!["check-algebra", "--dim", "3"], 2),
        ("functional at n=2", vec!["metric", "--dim", "2"], 2),
        ("unknown flag", vec!["metric", "--bogus"], 2),
        ("zero trials", vec!["metric", "--trials", "0"], 2),
        ("bad expression", vec!["functional", "--expr", "Ric[p,q]*Lp(p)*Lm(p)"], 2),
        ("mismatch", vec!["functional", "--expr", "Lp(1)*Lm(1)", "--variant", "lambda"], 1),
    ];
    let mut wrong = Vec::new();
    for (label, args, want) in &cases {
        let r = hodge(args);
        if r.code != *want {
            wrong.push(format!("{label}: got {} ({})", r.code, r.stderr.lines().next().unwrap_or("")));
        }
    }
    let note = if wrong.is_empty() { format!("{} cases", cases.len()) } else { wrong.join("; ") };
    timed(wrong.is_empty(), start.elapsed(), None, note)
}

fn main() {
    let criteria: Vec<(&str, &str, fn() -> Verdict)> = vec![
        ("1", "algebra relations for n = 2, 4, 6, 8", algebra),
        ("2", "trace identities against dense traces", traces),
        ("3", "σ(D)∘σ(D) against the stated symbols of D²", symbols),
        ("4", "closed-form inverse powers against parametrix composition", inverse),
        ("5", "metric functional", metric),
        ("6", "einstein functional, both routes, with cancellation", einstein),
        ("7", "endomorphism and second-order functional closed forms", lemmas),
        ("8", "closedness", closedness),
        ("9", "determinism of `all --dim 4 --seed 7`", determinism),
        ("10", "flat curvature", degenerate),
        ("-", "exit codes", exit_codes),
    ];
    let mut failed = 0;
    for (id, title, check) in &criteria {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {id:>2}  {}  {title}: {}", if v.pass { "PASS" } else { "FAIL" }, v.note);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
