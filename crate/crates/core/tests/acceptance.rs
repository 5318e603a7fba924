//! Acceptance suite: one PASS/FAIL line per criterion, then the detail of
//! every check. Checks marked as known gaps are reported but not asserted.

use percolab::suite::{run_all, SuiteOptions};

#[test]
fn acceptance() {
    let outcomes = run_all(&SuiteOptions::default());
    println!();
    for o in &outcomes {
        println!("{}", o.summary_line());
    }
    println!();
    for o in &outcomes {
        for c in &o.checks {
            let mark = match (c.pass, c.known_gap) {
                (true, _) => "ok  ",
                (false, true) => "gap ",
                (false, false) => "FAIL",
            };
            println!("  [{}] {mark} {}: {}", o.id, c.label, c.detail);
        }
    }
    let broken: Vec<u32> = outcomes.iter().filter(|o| !o.pass_modulo_gaps()).map(|o| o.id).collect();
    assert!(broken.is_empty(), "criteria failing outside known gaps: {broken:?}");
}
