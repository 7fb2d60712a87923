//! One-value reports: `shape`, `classify` and `rank`.

use collatz_matrix::criterion::{classify_number, criterion_holds};
use collatz_matrix::matrices::shapes;
use collatz_matrix::symmetry::classify;
use collatz_matrix::{AlgoParam, Rank};
use serde_json::json;

use crate::error::CliResult;
use crate::tables::rank_decimal;

fn emit(json: bool, text: String, value: serde_json::Value) -> String {
    if json {
        let mut s = serde_json::to_string(&value).expect("report serializes");
        s.push('\n');
        s
    } else {
        text
    }
}

pub fn shape_report(a: AlgoParam, json: bool) -> CliResult<String> {
    let s = shapes(a)?;
    let text = format!(
        "standard {}x{}\nlittle {}x{}\nbig {}x{}\n",
        s.standard.rows, s.standard.cols, s.little.rows, s.little.cols, s.big.rows, s.big.cols
    );
    let value = json!({
        "a": a.get(),
        "m_C": s.standard.rows, "n_C": s.standard.cols,
        "m_L": s.little.rows, "n_L": s.little.cols,
        "m_B": s.big.rows, "n_B": s.big.cols,
    });
    Ok(emit(json, text, value))
}

pub fn classify_report(a: AlgoParam, json: bool) -> CliResult<String> {
    let sym = classify(a);
    let class = classify_number(a)?;
    let f = sym.flags;
    let mut set = Vec::new();
    for (on, name) in [
        (f.sm_pattern, "SM"),
        (f.um_pattern, "UM"),
        (f.mm_pattern, "MM"),
        (f.imm_pattern, "IMM"),
    ] {
        if on {
            set.push(name);
        }
    }
    let text = format!(
        "symmetry {}\nflags {}\nclass {class}\n",
        sym.label,
        if set.is_empty() {
            "-".to_string()
        } else {
            set.join(" ")
        }
    );
    let value = json!({
        "a": a.get(),
        "symmetry": sym.label,
        "flags": sym.flags,
        "class": class,
    });
    Ok(emit(json, text, value))
}

pub fn rank_report(a: AlgoParam, json: bool) -> CliResult<String> {
    let s = collatz_matrix::matrices::standard_shape(a);
    let rank = Rank::new(s.rows - 1, s.cols);
    let criterion = if a.get() >= 3 {
        criterion_holds(a)?
    } else {
        rank.is_integer()
    };
    let text = format!(
        "rank {} = {}/{}\ndecimal {}\ncriterion {criterion}\n",
        rank,
        rank.numerator,
        rank.denominator,
        rank_decimal(rank)
    );
    let value = json!({
        "a": a.get(),
        "rank_num": rank.numerator,
        "rank_den": rank.denominator,
        "rank": rank.to_string(),
        "rank_decimal": rank_decimal(rank),
        "criterion": criterion,
    });
    Ok(emit(json, text, value))
}
