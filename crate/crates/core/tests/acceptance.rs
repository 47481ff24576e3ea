//! The ten acceptance criteria, one line each. Runs without the libtest
//! harness so the lines always reach the terminal.

use k3deg2::verify::{self, Check};
use serde_json::{json, Value};

const COUNTS: [u64; 18] =
    [6, 51, 328, 1518, 5406, 14979, 33132, 59339, 87077, 105236, 105078, 86505, 58223, 31564, 13371, 4209, 883, 99];

/// Extra assertions on the reported details, with the expected values
/// written out here rather than taken from the library.
fn confirm(c: &Check) -> Result<(), String> {
    let d = &c.detail;
    let want = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(format!("criterion {}: {what}: {d}", c.id))
        }
    };
    match c.id {
        1 => want(d["counts"] == json!(COUNTS) && d["rays"] == 103, "counts"),
        2 => {
            let lists = json!({
                "~A17": (0..18).collect::<Vec<_>>(),
                "~D10~E7": [0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15, 17, 18, 19, 20],
                "~E8^2~A1": [0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 15, 16, 17, 18, 19, 20, 23],
                "~D16~A1": [0, 1, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 23],
            });
            want(*d == lists, "vertex lists")
        }
        3 => want(d["type_ii"] == 3 && d["type_iii"] == 35 && d["total"] == 38, "divisors"),
        4 => want(d["e8"] == json!([1, 2, 3, 4, 5, 6, 4, 2, 3]) && d["rank"] == 5, "null vector"),
        6 => want(
            d["a19_a23"] == json!([10, 8, 30, 14, 22])
                && d["b"].as_array().map(|b| b[17..] == [3, 0, 5, 4, 15, 7, 11]) == Some(true)
                && d["bbar"][6] == 5
                && d["bbar"][12] == 4
                && d["bbar"][17] == 3
                && d["nontrivial_equator_components"] == 3,
            "worked example",
        ),
        _ => Ok(()),
    }
}

/// The one deviation: the paper lists [4..2] with quotient Z2, the Gram
/// matrix gives Z3, with an explicit integral witness.
fn known_saturation_deviation(c: &Check) -> bool {
    let v_a17: Vec<Value> =
        [3usize, 9, 15].iter().map(|gap| json!((0..18).filter(|i| i != gap).collect::<Vec<_>>())).collect();
    let mism = c.detail["mismatches"].as_array().cloned().unwrap_or_default();
    c.id == 5
        && !c.passed
        && mism.len() == 3
        && mism.iter().all(|m| v_a17.contains(&m["diagram"]) && m["got"] == json!([3]) && m["want"] == json!([2]))
        && c.detail["witness"]["integral"] == true
        && verify::chain_witness(3, 3)
        && !verify::chain_witness(3, 2)
}

fn main() {
    let checks = verify::all();
    let mut unexpected = Vec::new();
    for c in &checks {
        println!("{}", c.line());
        if c.passed {
            if let Err(e) = confirm(c) {
                unexpected.push(e);
            }
        } else if known_saturation_deviation(c) {
            println!("    [4..2] (vA17-): computed quotient Z3, paper lists Z2; see decisions ledger");
        } else {
            unexpected.push(format!("criterion {} failed: {}", c.id, c.detail));
        }
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} criteria pass", checks.len());
    if !unexpected.is_empty() {
        for e in &unexpected {
            eprintln!("{e}");
        }
        std::process::exit(1);
    }
}
