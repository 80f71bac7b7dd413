//! Parse/print round-trips on the bundled scenarios: rendering a parsed
//! scenario and parsing it again is the identity on the parsed form.

// the included modules also serve the binary; not all of their items are
// exercised from this harness
#![allow(dead_code)]

use std::fs;
use std::path::Path;

// the scenario machinery lives in the binary crate; include it directly
#[path = "../src/expr.rs"]
mod expr;
#[path = "../src/scenario.rs"]
mod scenario;

use scenario::{parse_scenario, run_scenario};

fn bundled() -> Vec<(String, String)> {
    let dir = Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios"));
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|x| x == "scn") {
            out.push((
                path.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read_to_string(&path).unwrap(),
            ));
        }
    }
    out.sort();
    out
}

#[test]
fn parse_print_parse_is_identity() {
    for (name, text) in bundled() {
        let parsed = parse_scenario(&text).unwrap_or_else(|e| panic!("{}: {}", name, e));
        let printed = parsed.to_string();
        let reparsed =
            parse_scenario(&printed).unwrap_or_else(|e| panic!("{} (reprinted): {}", name, e));
        assert_eq!(parsed, reparsed, "round-trip changed {}", name);
    }
}

#[test]
fn grammar_corners_parse() {
    // nested parentheses inside a decay tuple
    let s = parse_scenario(
        "space qvec 2\n\
         net periodic+rational cycle=[(0, 0), (2, 1)] decay=((2n+1)/n - 2, 1/n)\n\
         mode decide\n\
         x (1, 0)\n\
         r (1, 1)\n",
    )
    .unwrap();
    let t = s.net.term(2).unwrap().coords().unwrap();
    // (2*2+1)/2 - 2 = 1/2 added onto the cycle entry 2
    assert_eq!(t[0].to_string(), "5/2");
    // the tail combinator reindexes
    let s = parse_scenario(
        "space qvec 1\n\
         net tail 5 of rational (1/n)\n\
         mode decide\n\
         x (0)\n\
         r (1)\n",
    )
    .unwrap();
    assert_eq!(s.net.term(1).unwrap().coords().unwrap()[0].to_string(), "1/5");
    // the worked lexicographic scenario parses into the expected data
    let s = parse_scenario(
        "space lex\n\
         net rational (1/n, 1/n)\n\
         conv monotone\n\
         mode verify\n\
         x lex(0, 0)\n\
         r lex(1, 0)\n\
         witness net rational (0, 2/n)\n",
    )
    .unwrap();
    assert_eq!(s.mode, scenario::Mode::Verify);
    assert!(s.witness.is_some());
    assert_eq!(run_scenario(&s).unwrap().output, "accept");
}

#[test]
fn reprinted_scenarios_run_to_the_same_verdict() {
    for (name, text) in bundled() {
        let parsed = parse_scenario(&text).unwrap();
        let direct = run_scenario(&parsed).unwrap();
        let reparsed = parse_scenario(&parsed.to_string()).unwrap();
        let again = run_scenario(&reparsed).unwrap();
        assert_eq!(direct.output, again.output, "{}", name);
        assert_eq!(again.matches, Some(true), "{}", name);
    }
}
