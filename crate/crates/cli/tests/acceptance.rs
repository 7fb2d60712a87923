//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use collatz_cli::render::{build_grid, Mark, MatrixKind, RenderFormat, RenderRequest};
use collatz_cli::scan::{run_scan, ScanConfig};
use collatz_cli::tables::{parse_csv, ShapeRow};
use collatz_matrix::criterion::{criterion_holds, pseudoprime_scan, RankCensus};
use collatz_matrix::mersenne::{
    is_singular, mersenne_is_prime, nc_count_bounded, nc_count_exact, nc_histogram_bounded,
};
use collatz_matrix::numth::{factorize_u64, fermat_base2_holds, is_prime, ord2};
use collatz_matrix::{odd_range, AlgoParam, RankPopulation, SymmetryLabel};

const BIN: &str = env!("CARGO_BIN_EXE_collatz-matrix");
const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");

type Outcome = Result<String, String>;

fn bin(args: &[&str]) -> Result<(i32, String, String), String> {
    let out = Command::new(BIN)
        .args(args)
        .output()
        .map_err(|e| format!("spawn {BIN}: {e}"))?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    ))
}

fn within(budget: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took > budget {
        Err(format!("took {took:.2?}, budget {budget:?}"))
    } else {
        Ok(took)
    }
}

/// `(a, m_C, n_C, m_L, n_L, m_B, n_B, symmetry)`.
type ShapeLine = (u64, u64, u64, u64, u64, u64, u64, &'static str);
type Criterion = (&'static str, fn() -> Outcome);

/// Every odd `a` up to 61.
const SHAPES: [ShapeLine; 31] = [
    (1, 1, 1, 1, 1, 1, 1, "UM"),
    (3, 3, 2, 1, 2, 9, 6, "UM"),
    (5, 5, 4, 2, 1, 25, 20, "SM"),
    (7, 7, 3, 1, 3, 49, 21, "UM"),
    (9, 9, 6, 3, 1, 81, 54, "MM"),
    (11, 11, 10, 2, 2, 121, 110, "SM"),
    (13, 13, 12, 4, 1, 169, 156, "SM"),
    (15, 15, 4, 1, 4, 225, 60, "UM"),
    (17, 17, 8, 5, 1, 289, 136, "MM"),
    (19, 19, 18, 3, 2, 361, 342, "SM"),
    (21, 21, 6, 6, 1, 441, 126, "USM"),
    (23, 23, 11, 2, 3, 529, 253, "IMM"),
    (25, 25, 20, 7, 1, 625, 500, "MM"),
    (27, 27, 18, 4, 2, 729, 486, "MM"),
    (29, 29, 28, 8, 1, 841, 812, "SM"),
    (31, 31, 5, 1, 5, 961, 155, "UM"),
    (33, 33, 10, 9, 1, 1089, 330, "MM"),
    (35, 35, 12, 5, 2, 1225, 420, "USM"),
    (37, 37, 36, 10, 1, 1369, 1332, "SM"),
    (39, 39, 12, 3, 3, 1521, 468, "USM"),
    (41, 41, 20, 11, 1, 1681, 820, "MM"),
    (43, 43, 14, 6, 2, 1849, 602, "MM"),
    (45, 45, 12, 12, 1, 2025, 540, "USM"),
    (47, 47, 23, 2, 4, 2209, 1081, "IMM"),
    (49, 49, 21, 13, 1, 2401, 1029, "USM"),
    (51, 51, 8, 7, 2, 2601, 408, "USM"),
    (53, 53, 52, 14, 1, 2809, 2756, "SM"),
    (55, 55, 20, 4, 3, 3025, 1100, "USM"),
    (57, 57, 18, 15, 1, 3249, 1026, "MM"),
    (59, 59, 58, 8, 2, 3481, 3422, "SM"),
    (61, 61, 60, 16, 1, 3721, 3660, "SM"),
];

fn shapes_table() -> Outcome {
    let started = Instant::now();
    let (code, stdout, stderr) = bin(&["table", "1", "--format", "csv"])?;
    if code != 0 {
        return Err(format!("exit {code}: {stderr}"));
    }
    let rows: Vec<ShapeRow> = parse_csv(&stdout).map_err(|e| e.to_string())?;
    if rows.len() != SHAPES.len() {
        return Err(format!("{} rows, expected {}", rows.len(), SHAPES.len()));
    }
    for (r, &(a, mc, nc, ml, nl, mb, nb, sym)) in rows.iter().zip(&SHAPES) {
        let want = (
            a,
            mc,
            nc,
            ml,
            nl,
            mb,
            nb,
            sym.parse::<SymmetryLabel>().unwrap(),
        );
        let got = (r.a, r.m_c, r.n_c, r.m_l, r.n_l, r.m_b, r.n_b, r.symmetry);
        if got != want {
            return Err(format!("row a = {a}: got {got:?}, expected {want:?}"));
        }
    }
    let took = within(Duration::from_secs(1), started)?;
    Ok(format!("31/31 rows exact in {took:.2?}"))
}

fn criterion_vs_fermat() -> Outcome {
    let started = Instant::now();
    let mut mismatches = Vec::new();
    let mut holders = 0;
    for a in odd_range(3, 100_000) {
        let holds = criterion_holds(a).map_err(|e| e.to_string())?;
        // independent oracle: plain modular exponent, no order computed
        let fermat = fermat_base2_holds(a.get()).map_err(|e| e.to_string())?;
        if holds != fermat {
            mismatches.push(a.get());
        }
        holders += holds as u64;
    }
    if !mismatches.is_empty() {
        return Err(format!(
            "{} mismatches, first {:?}",
            mismatches.len(),
            &mismatches[..mismatches.len().min(10)]
        ));
    }
    let took = within(Duration::from_secs(120), started)?;
    Ok(format!(
        "49999 odd a, 0 mismatches, {holders} holders, {took:.2?}"
    ))
}

/// `(a, m_C, n_C, m_L, n_L, rank)`.
const PSEUDOPRIMES: [(u64, u64, u64, u64, u64, u64); 17] = [
    (341, 341, 10, 86, 1, 34),
    (561, 561, 40, 141, 1, 14),
    (645, 645, 28, 162, 1, 23),
    (1105, 1105, 24, 277, 1, 46),
    (1387, 1387, 18, 174, 2, 77),
    (1729, 1729, 36, 433, 1, 48),
    (1905, 1905, 28, 477, 1, 68),
    (2047, 2047, 11, 1, 11, 186),
    (2465, 2465, 56, 617, 1, 44),
    (2701, 2701, 36, 676, 1, 75),
    (2821, 2821, 60, 706, 1, 47),
    (3277, 3277, 28, 820, 1, 117),
    (4033, 4033, 36, 1009, 1, 112),
    (4369, 4369, 16, 1093, 1, 273),
    (4371, 4371, 230, 547, 2, 19),
    (4681, 4681, 15, 1171, 1, 312),
    (5461, 5461, 14, 1366, 1, 390),
];

fn pseudoprime_table() -> Outcome {
    let started = Instant::now();
    let records = pseudoprime_scan(5461).map_err(|e| e.to_string())?;
    let got: Vec<(u64, u64, u64, u64, u64, u64)> = records
        .iter()
        .map(|r| {
            let rank = r.rank().as_integer().unwrap_or(u64::MAX);
            (r.a, r.m_c, r.n_c, r.m_l, r.n_l, rank)
        })
        .collect();
    if got != PSEUDOPRIMES {
        return Err(format!("got {got:?}"));
    }
    // composite and Fermat, checked without the order
    for &(a, ..) in &PSEUDOPRIMES {
        if is_prime(a) || !fermat_base2_holds(a).unwrap() {
            return Err(format!("{a} is not a base-2 pseudoprime"));
        }
    }
    let took = within(Duration::from_secs(10), started)?;
    Ok(format!("17/17 composites exact in {took:.2?}"))
}

const WIDTH_COUNTS: [u64; 19] = [1, 1, 1, 2, 1, 3, 1, 4, 2, 5, 3, 16, 1, 5, 5, 8, 1, 24, 1];

fn width_frequencies() -> Outcome {
    let started = Instant::now();
    let hist = nc_histogram_bounded(19, 1_999_999);
    let bounded_took = within(Duration::from_secs(300), started)?;
    let spot = nc_count_bounded(11, 1_999_999).map_err(|e| e.to_string())?;
    if spot.count != 3 {
        return Err(format!("nc_count_bounded(11) = {}", spot.count));
    }
    let t = Instant::now();
    let exact: Vec<_> = (1..=19)
        .map(|n| nc_count_exact(n).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let exact_took = within(Duration::from_secs(1), t)?;
    for (n, want) in (1..=19u64).zip(WIDTH_COUNTS) {
        let b = &hist[(n - 1) as usize];
        let e = &exact[(n - 1) as usize];
        if b.count != want || e.count() != want {
            return Err(format!(
                "n = {n}: bounded {}, exact {}, expected {want}",
                b.count,
                e.count()
            ));
        }
        if Some(&b.witnesses) != e.witnesses_u64().as_ref() {
            return Err(format!("n = {n}: bounded and exact witnesses differ"));
        }
    }
    Ok(format!(
        "19/19 counts exact; bounded scan {bounded_took:.2?}, exact oracle {exact_took:.2?}"
    ))
}

fn singular_exponents() -> Outcome {
    let started = Instant::now();
    let mut singular = BTreeSet::new();
    for n in 2..=31u64 {
        let s = is_singular(n).map_err(|e| e.to_string())?;
        let ll = mersenne_is_prime(n).map_err(|e| e.to_string())?;
        if s != ll {
            return Err(format!("n = {n}: singular {s}, Lucas-Lehmer {ll}"));
        }
        if s {
            singular.insert(n);
        }
    }
    let want: BTreeSet<u64> = [2, 3, 5, 7, 13, 17, 19, 31].into();
    if singular != want {
        return Err(format!("singular set {singular:?}"));
    }
    let w11 = nc_count_exact(11)
        .map_err(|e| e.to_string())?
        .witnesses_u64();
    if w11 != Some(vec![23, 89, 2047]) {
        return Err(format!("n = 11 witnesses {w11:?}"));
    }
    let took = within(Duration::from_secs(30), started)?;
    Ok(format!(
        "singular n = {singular:?}, all equal to Lucas-Lehmer, n = 11 -> 23 89 2047, {took:.2?}"
    ))
}

const RANK_COUNTS: [u64; 18] = [
    29341, 22092, 5233, 3655, 1477, 3931, 694, 2781, 579, 1089, 278, 628, 195, 547, 248, 686, 115,
    432,
];

fn rank_frequencies() -> Outcome {
    let started = Instant::now();
    let census = RankCensus::build(1_000_000);
    let primes = census.frequency(18, RankPopulation::Primes);
    let holders = census.frequency(18, RankPopulation::CriterionHolders);
    let mut notes = Vec::new();
    for r in 1..=18u64 {
        let want = RANK_COUNTS[(r - 1) as usize];
        let p = primes.count(r);
        if p == want {
            continue;
        }
        // re-check every member of the cell with the direct doubling order
        for &a in &census.members(r, RankPopulation::CriterionHolders) {
            let order = ord2(a).map_err(|e| e.to_string())?;
            if (a - 1) % order != 0 || (a - 1) / order != r {
                return Err(format!("rank {r}: a = {a} has ord2 {order} by doubling"));
            }
        }
        let extra: Vec<u64> = census
            .members(r, RankPopulation::CriterionHolders)
            .into_iter()
            .filter(|&a| !is_prime(a))
            .collect();
        for &a in &extra {
            if factorize_u64(a).iter().map(|&(_, e)| e).sum::<u32>() < 2 {
                return Err(format!("rank {r}: {a} expected composite"));
            }
        }
        notes.push(format!(
            "rank {r}: primes {p} vs {want}, pseudoprimes {extra:?}"
        ));
        if holders.count(r) != want {
            return Err(format!(
                "rank {r}: primes {p}, primes and pseudoprimes {}, expected {want}",
                holders.count(r)
            ));
        }
    }
    if holders.counts != RANK_COUNTS {
        return Err(format!("criterion-holder counts {:?}", holders.counts));
    }
    let took = within(Duration::from_secs(300), started)?;
    if notes.is_empty() {
        Ok(format!("18/18 prime counts exact in {took:.2?}"))
    } else {
        Ok(format!(
            "18/18 cells exact when base-2 pseudoprimes are counted; prime-only discrepancies, \
             re-verified by doubling order: {}; {took:.2?}",
            notes.join("; ")
        ))
    }
}

fn structural_suite() -> Outcome {
    let started = Instant::now();
    let (code, stdout, stderr) = bin(&["verify", "--suite", "invariants", "--bound", "2001"])?;
    if code != 0 {
        return Err(format!("exit {code}\n{stdout}{stderr}"));
    }
    let checks = stdout.lines().filter(|l| l.starts_with("ok ")).count();
    if checks != 9 || stdout.contains("FAIL") {
        return Err(format!("unexpected report\n{stdout}"));
    }
    let took = within(Duration::from_secs(120), started)?;
    Ok(format!("9 checks, 0 violations, exit 0, {took:.2?}"))
}

fn symmetry_suites() -> Outcome {
    let started = Instant::now();
    let mut summary = Vec::new();
    for suite in ["symmetry", "rank-symmetry"] {
        let (code, stdout, stderr) = bin(&["verify", "--suite", suite, "--bound", "20001"])?;
        if code != 0 {
            return Err(format!("{suite}: exit {code}\n{stdout}{stderr}"));
        }
        if stdout.contains("counterexample") {
            return Err(format!("{suite}: {stdout}"));
        }
        let detail = stdout.lines().nth(1).unwrap_or_default().to_string();
        summary.push(format!("{suite} [{detail}]"));
    }
    // table 1 class counts from the same scan at a <= 61
    let (_, stdout, _) = bin(&["verify", "--suite", "symmetry", "--bound", "61"])?;
    if !stdout.contains("classes: SM 9, UM 5, MM 8, IMM 2, USM 7") {
        return Err(format!("a <= 61 counts: {stdout}"));
    }
    let took = within(Duration::from_secs(60), started)?;
    Ok(format!(
        "0 counterexamples to 20001: {}; {took:.2?}",
        summary.join(", ")
    ))
}

fn render_goldens() -> Outcome {
    let mut checked = Vec::new();
    for (matrix, file) in [
        ("standard", "render_3_standard.txt"),
        ("big", "render_3_big.txt"),
    ] {
        let (code, stdout, stderr) = bin(&["render", "3", "--matrix", matrix])?;
        if code != 0 {
            return Err(format!("{matrix}: exit {code}: {stderr}"));
        }
        let golden =
            fs::read_to_string(Path::new(GOLDEN).join(file)).map_err(|e| format!("{file}: {e}"))?;
        if stdout != golden {
            return Err(format!("{matrix}: output differs from {file}\n{stdout}"));
        }
        checked.push(file);
    }
    let req = |matrix| RenderRequest {
        a: AlgoParam::new(3).unwrap(),
        matrix,
        rows: None,
        cols: None,
        format: RenderFormat::Ascii,
        color: false,
    };
    let big = build_grid(&req(MatrixKind::Big)).map_err(|e| e.to_string())?;
    let perfect = big.positions(Mark::Perfect);
    if perfect != [(1, 6), (3, 1), (4, 2), (6, 5), (7, 4), (9, 3)] {
        return Err(format!("big perfect knots {perfect:?}"));
    }
    let standard = build_grid(&req(MatrixKind::Standard)).map_err(|e| e.to_string())?;
    let knots = standard.positions(Mark::Knot);
    let unbranched: Vec<u64> = standard
        .grid
        .iter()
        .filter(|r| r.unbranched)
        .map(|r| r.row)
        .collect();
    if knots != [(1, 2), (3, 1)] || unbranched != [2] {
        return Err(format!(
            "standard knots {knots:?}, unbranched {unbranched:?}"
        ));
    }
    Ok(format!("byte-exact: {}", checked.join(", ")))
}

fn scan_resume() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let block = 50;
    let base = |name: &str, checkpoint: bool| ScanConfig {
        from: 3,
        to: 999,
        out: dir.path().join(format!("{name}.jsonl")),
        checkpoint: checkpoint.then(|| dir.path().join(format!("{name}.ckpt"))),
        workers: 1,
        block,
        max_blocks: None,
    };
    let whole = base("whole", false);
    run_scan(&whole).map_err(|e| e.to_string())?;
    let expected = fs::read(&whole.out).map_err(|e| e.to_string())?;
    let records = expected.iter().filter(|&&b| b == b'\n').count();
    if records != 499 {
        return Err(format!("{records} records"));
    }
    let blocks = 499u64.div_ceil(block);
    for k in 1..blocks {
        let mut cfg = base(&format!("cut{k}"), true);
        cfg.max_blocks = Some(k);
        let first = run_scan(&cfg).map_err(|e| e.to_string())?;
        if first.complete {
            return Err(format!("cut after {k} blocks ran to completion"));
        }
        cfg.max_blocks = None;
        cfg.workers = 1 + (k as usize % 4);
        run_scan(&cfg).map_err(|e| e.to_string())?;
        if fs::read(&cfg.out).map_err(|e| e.to_string())? != expected {
            return Err(format!("resume after block {k} differs"));
        }
    }
    // the same through the binary, with a torn record after the checkpoint
    let out = dir.path().join("bin.jsonl");
    let ckpt = dir.path().join("bin.ckpt");
    let args = |extra: &[&str]| -> Vec<String> {
        let mut v: Vec<String> = [
            "scan", "--from", "3", "--to", "999", "--block", "50", "--out",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        v.push(out.display().to_string());
        v.push("--checkpoint".into());
        v.push(ckpt.display().to_string());
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let run = |a: Vec<String>| -> Result<(), String> {
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        let (code, _, stderr) = bin(&refs)?;
        if code == 0 {
            Ok(())
        } else {
            Err(format!("exit {code}: {stderr}"))
        }
    };
    run(args(&["--max-blocks", "5"]))?;
    let mut torn = fs::read(&out).map_err(|e| e.to_string())?;
    torn.extend_from_slice(b"{\"a\":501,\"m_C\":50");
    fs::write(&out, torn).map_err(|e| e.to_string())?;
    run(args(&["--workers", "4"]))?;
    if fs::read(&out).map_err(|e| e.to_string())? != expected {
        return Err("binary resume with torn tail differs".into());
    }
    Ok(format!(
        "interrupted after each of blocks 1..{} and resumed: byte-identical; torn-tail resume via binary identical",
        blocks - 1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table 1 shapes and symmetry labels", shapes_table),
        (
            "criterion equals Fermat base 2 on [3, 100000]",
            criterion_vs_fermat,
        ),
        ("table 4 pseudoprimes to 5461", pseudoprime_table),
        ("table 5 width frequencies", width_frequencies),
        ("singular exponents 2..31", singular_exponents),
        ("table 3 rank frequencies to 10^6", rank_frequencies),
        ("structural invariants", structural_suite),
        ("rank-symmetry and symmetry-prime scans", symmetry_suites),
        ("render goldens", render_goldens),
        ("scan resume determinism", scan_resume),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
