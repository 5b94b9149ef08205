//! End-to-end tests of the command-line surface: digests, exit codes,
//! counters JSON, KAT round trips, and the CSV reports.

use std::collections::HashMap;
use std::process::{Command, Output};

use brwhash::counters::OpCounters;
use brwhash::hash::{decbrw_hash, polyhash, Backend};
use brwhash::{P1271, P1305};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

const RFC_KEY: &str = "85d6be7857556d337f4452fe42d506a80103808afb0db2fd4abff6af4149f51b";
const RFC_MSG: &str = "43727970746f6772617068696320466f72756d2052657365617263682047726f7570";
const RFC_TAG: &str = "a8061dc1305136c6c22b8baf0c0127a9";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brwhash"))
        .args(args)
        .output()
        .expect("spawn brwhash binary")
}

fn stdout_trim(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn stderr_string(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited without a code")
}

fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn poly1305_rfc_vector_through_the_cli() {
    for backend in ["scalar", "vec4"] {
        for g in ["1", "4"] {
            let out = run(&[
                "hash",
                "--algo",
                "poly1305",
                "--key-hex",
                RFC_KEY,
                "--msg-hex",
                RFC_MSG,
                "--g",
                g,
                "--backend",
                backend,
            ]);
            assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));
            assert_eq!(stdout_trim(&out), RFC_TAG, "g {g} backend {backend}");
        }
    }
}

#[test]
fn file_input_matches_the_library() {
    let mut rng = ChaCha20Rng::seed_from_u64(0xc11_0001);
    let mut msg = vec![0u8; 1000];
    rng.fill_bytes(&mut msg);
    let mut key = [0u8; 16];
    rng.fill_bytes(&mut key);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("msg.bin");
    std::fs::write(&path, &msg).unwrap();

    let mut counters = OpCounters::new();
    let expect = decbrw_hash(&key, &msg, 4, 3, Backend::Vec4, &P1271, &mut counters).unwrap();

    let out = run(&[
        "hash",
        "--algo",
        "decbrw",
        "--prime",
        "1271",
        "--key-hex",
        &to_hex(&key),
        "--in",
        path.to_str().unwrap(),
        "--c",
        "4",
        "--t",
        "3",
        "--backend",
        "vec4",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));
    assert_eq!(stdout_trim(&out), to_hex(&expect));
}

#[test]
fn empty_message_digests_are_zero() {
    let key = "000102030405060708090a0b0c0d0e0f";
    for algo in ["polyhash", "brwhash", "decbrw"] {
        let out = run(&["hash", "--algo", algo, "--key-hex", key, "--msg-hex", ""]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));
        assert_eq!(
            stdout_trim(&out),
            "0".repeat(32),
            "empty message under {algo}"
        );
    }
}

#[test]
fn one_stream_decimation_matches_brwhash() {
    let key = "deadbeefdeadbeefdeadbeefdeadbeef";
    let msg: String = (0..100).map(|i| format!("{:02x}", (i * 7) as u8)).collect();
    let plain = run(&[
        "hash", "--algo", "brwhash", "--key-hex", key, "--msg-hex", &msg, "--t", "4",
    ]);
    let dec = run(&[
        "hash", "--algo", "decbrw", "--key-hex", key, "--msg-hex", &msg, "--c", "1", "--t", "4",
    ]);
    assert_eq!(code(&plain), 0);
    assert_eq!(code(&dec), 0);
    assert_eq!(stdout_trim(&plain), stdout_trim(&dec));
}

#[test]
fn key_length_mismatch_exits_three() {
    let out = run(&[
        "hash", "--algo", "polyhash", "--key-hex", "abcd", "--msg-hex", "",
    ]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr_string(&out).contains("key"),
        "stderr: {}",
        stderr_string(&out)
    );

    // poly1305 needs 32 key bytes; 16 is a length error, not a usage error.
    let out = run(&[
        "hash",
        "--algo",
        "poly1305",
        "--key-hex",
        "000102030405060708090a0b0c0d0e0f",
        "--msg-hex",
        "",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_exit_two() {
    let key = "000102030405060708090a0b0c0d0e0f";
    let cases: Vec<Vec<&str>> = vec![
        // Horner group size out of range: rejected by the parser.
        vec![
            "hash", "--algo", "polyhash", "--key-hex", key, "--msg-hex", "", "--g", "9",
        ],
        // poly1305 is pinned to 2^130 - 5.
        vec![
            "hash", "--algo", "poly1305", "--prime", "1271", "--key-hex", RFC_KEY, "--msg-hex",
            "",
        ],
        // The packed backend needs exactly four streams.
        vec![
            "hash", "--algo", "decbrw", "--key-hex", key, "--msg-hex", "", "--c", "3",
            "--backend", "vec4",
        ],
        // A message source is mandatory.
        vec!["hash", "--algo", "polyhash", "--key-hex", key],
        // Odd-length hex cannot be bytes.
        vec![
            "hash", "--algo", "polyhash", "--key-hex", key, "--msg-hex", "abc",
        ],
        // Toy digest wider than the toy field.
        vec!["analyze", "--mu", "8"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(
            code(&out),
            2,
            "args {args:?}, stderr: {}",
            stderr_string(&out)
        );
    }
}

#[test]
fn counters_json_lands_on_stderr() {
    let msg: String = "ab".repeat(80);
    let out = run(&[
        "hash",
        "--algo",
        "polyhash",
        "--key-hex",
        "000102030405060708090a0b0c0d0e0f",
        "--msg-hex",
        &msg,
        "--g",
        "2",
        "--counters",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));

    let key: [u8; 16] = (0..16u8).collect::<Vec<u8>>().try_into().unwrap();
    let mut counters = OpCounters::new();
    let expect = polyhash(
        &key,
        &[0xab; 80],
        2,
        Backend::Scalar,
        &P1305,
        &mut counters,
    )
    .unwrap();
    assert_eq!(stdout_trim(&out), to_hex(&expect));

    let parsed: serde_json::Value = serde_json::from_str(stderr_string(&out).trim()).unwrap();
    for field in [
        "scalar_unreduced_mults",
        "scalar_reductions",
        "lane_unreduced_mults",
        "lane_reductions",
        "full_mults",
        "squarings",
    ] {
        assert!(parsed.get(field).is_some(), "missing counter field {field}");
    }
    // 80 bytes over 2^130 - 5 is five blocks; the one-shot also counts the
    // schedule build, so the total is at least the per-block work.
    assert!(parsed["scalar_unreduced_mults"].as_u64().unwrap() >= 5);
}

#[test]
fn kat_files_round_trip_and_catch_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let scalar_path = dir.path().join("scalar.jsonl");
    let vec4_path = dir.path().join("vec4.jsonl");

    let out = run(&["kat", "generate", scalar_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));
    assert!(stdout_trim(&out).starts_with("wrote 81 records"));
    let body = std::fs::read_to_string(&scalar_path).unwrap();
    assert_eq!(body.lines().count(), 81);

    // Digests are backend-independent, so a vec4 generation is the same file.
    let out = run(&[
        "kat",
        "generate",
        vec4_path.to_str().unwrap(),
        "--backend",
        "vec4",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&vec4_path).unwrap(), body);

    for backend in ["scalar", "vec4"] {
        let out = run(&[
            "kat",
            "verify",
            scalar_path.to_str().unwrap(),
            "--backend",
            backend,
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));
        assert_eq!(stdout_trim(&out), "verified 81 records");
    }

    // Flip one digest nibble; verification must fail loudly and echo the
    // offending record.
    let marker = "\"digest_hex\":\"";
    let at = body.find(marker).unwrap() + marker.len();
    let mut corrupted = body.clone();
    let old = corrupted.as_bytes()[at];
    let new = if old == b'0' { b'1' } else { b'0' };
    // Safety: replacing one ASCII hex digit with another keeps valid UTF-8.
    unsafe { corrupted.as_bytes_mut()[at] = new };
    let bad_path = dir.path().join("bad.jsonl");
    std::fs::write(&bad_path, &corrupted).unwrap();

    let out = run(&["kat", "verify", bad_path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr_string(&out);
    assert!(
        err.contains("failed") && err.contains("digest_hex"),
        "stderr: {err}"
    );
}

#[test]
fn bench_csv_reports_exact_operation_counts() {
    let out = run(&[
        "bench",
        "--lengths",
        "4,8",
        "--params",
        "2",
        "--reps",
        "1",
        "--prime",
        "1305",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));
    let body = String::from_utf8_lossy(&out.stdout).into_owned();
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algo,prime,param,blocks,nspb_pre,nspb_fly,unred_mult,red,lane_unred_mult,lane_red,full_mult,squarings"
    );

    let mut rows: HashMap<(String, u64), Vec<String>> = HashMap::new();
    for line in lines {
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        assert_eq!(cells.len(), 12, "row {line}");
        assert_eq!(cells[1], "1305");
        assert_eq!(cells[2], "2");
        for timing in [&cells[4], &cells[5]] {
            let v: f64 = timing.parse().unwrap();
            assert!(v > 0.0, "non-positive timing in {line}");
        }
        rows.insert((cells[0].clone(), cells[3].parse().unwrap()), cells);
    }
    assert_eq!(rows.len(), 10, "5 algorithms x 2 lengths");

    let ops = |algo: &str, blocks: u64| -> Vec<u64> {
        rows[&(algo.to_string(), blocks)][6..]
            .iter()
            .map(|c| c.parse().unwrap())
            .collect()
    };
    // Columns: unred_mult, red, lane_unred_mult, lane_red, full_mult, squarings.
    assert_eq!(ops("polyhash", 8), [8, 4, 0, 0, 0, 0]);
    assert_eq!(ops("polyhash-vec4", 8), [0, 1, 2, 1, 0, 0]);
    assert_eq!(ops("brwhash", 8), [6, 5, 0, 0, 0, 0]);
    assert_eq!(ops("decbrw", 8), [4, 4, 0, 0, 5, 1]);
    assert_eq!(ops("decbrw-vec4", 8), [0, 0, 1, 1, 5, 1]);
    assert_eq!(ops("brwhash", 4), [4, 4, 0, 0, 0, 0]);
    assert_eq!(ops("decbrw-vec4", 4), [0, 0, 0, 1, 5, 1]);
}

#[test]
fn analyze_reports_every_class_within_bounds() {
    let out = run(&["analyze", "--max-bits", "6"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_string(&out));
    assert_eq!(stderr_string(&out), "", "expected no vacuous-bound warnings");
    let body = String::from_utf8_lossy(&out.stdout).into_owned();
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,ell,c,params,queries_checked,max_count,bound_count,pass"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // poly, brw, dec c=1, dec c=2; two block-length classes each.
    assert_eq!(rows.len(), 8);
    for row in &rows {
        assert_eq!(row[7], "true", "row {row:?}");
        let max: u64 = row[5].parse().unwrap();
        let bound: u64 = row[6].parse().unwrap();
        assert!(max <= bound, "row {row:?}");
    }
    assert_eq!(rows[0][0], "poly");
    assert_eq!(rows[0][1], "1");
}
