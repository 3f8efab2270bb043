//! Acceptance gate, CLI half: criterion 13. The first twelve criteria live
//! in the core crate's acceptance tests; this one needs the built binary.

use std::process::Command;

#[test]
fn criterion_13_verify_all_deterministic() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sregular"))
            .args(["verify", "all", "--seed", "7"])
            .output()
            .expect("spawn sregular")
    };
    let first = run();
    let second = run();
    let pass = first.status.code() == Some(0)
        && second.status.code() == Some(0)
        && !first.stdout.is_empty()
        && first.stdout == second.stdout;
    println!(
        "criterion 13 (verify all --seed 7: exit 0, byte-identical reruns): {}  [exit {:?}/{:?}, {} bytes, identical: {}]",
        if pass { "PASS" } else { "FAIL" },
        first.status.code(),
        second.status.code(),
        first.stdout.len(),
        first.stdout == second.stdout
    );
    assert!(pass, "exit codes {:?}/{:?}", first.status.code(), second.status.code());
}
