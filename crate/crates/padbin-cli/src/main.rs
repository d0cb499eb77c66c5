//! `padbin` — exact verification sweeps for p-adic binomial congruences.
//!
//! Every subcommand emits one [`records::CheckRecord`] per verified
//! instance, in deterministic input order regardless of `--threads`.
//! Exit code: 0 when all records pass, 1 when any fails, 2 on usage or
//! precondition errors.

mod records;
mod sweep;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use padbin::approx::{analyze, predicted_order, ApproxInstance, DEFAULT_PRECISION_MARGIN};
use padbin::arith::{rational_valuation, valuation, valuation_u64, Valuation};
use padbin::bernoulli::wolstenholme_order;
use padbin::binomial::modified_binomial_exact;
use padbin::mobius::{divisor_sum_check, signed_divisor_sum_check, DivisorSumReport};
use padbin::primes::primes_in;
use padbin::symfunc::{
    binomial_ratio_check, build_unit_set, newton_girard_check, sigma_from_power_sums, sym_data,
};
use padbin::wolstenholme::{c_coefficients, combo_sum, combo_value};
use padbin::{Integer, Rational};

use records::{CheckRecord, Order};

#[derive(Parser)]
#[command(name = "padbin", version, about = "Exact p-adic binomial congruence checks")]
struct Cli {
    /// Worker threads for range sweeps; output is byte-identical for any
    /// value.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    /// Stop emitting after the first failing record.
    #[arg(long, global = true)]
    fail_fast: bool,
    /// Output format; `bfile` is only valid for `sequence`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
    Bfile,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check one congruence family
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Print the integer combination coefficients and normalizer for one n
    Coeffs {
        #[arg(long)]
        n: u64,
    },
    /// Emit the central-combination quotient sequence over a prime range
    Sequence {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
    },
    /// Möbius divisor-sum divisibility sweep over moduli up to m-max
    Mobius {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        m_max: u64,
        /// Alternating-sign variant (universal factor 12 instead of 6)
        #[arg(long)]
        signed: bool,
        /// Use the refined per-pair factor instead of the universal one
        #[arg(long)]
        refined: bool,
    },
    /// Scan primes for fourth-order central binomial contact; a passing
    /// record is a find
    Wolstenholme {
        #[arg(long)]
        p_max: u64,
    },
    /// Identity oracles
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Congruence order of C(ap,bp)_p - 1 against 3 + v_p(ab(a-b))
    Jacobsthal {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
    },
    /// Multi-point approximation order for one instance
    Theorem1 {
        /// Left argument a0 of the target C(a0 q, b q)_p
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Interpolation points, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        alist: Vec<u64>,
        #[arg(long)]
        p: u64,
        /// q = p^E
        #[arg(long)]
        q_exp: u32,
        /// Working precision for the multiplicative route (default:
        /// predicted order plus a small margin)
        #[arg(long)]
        k_work: Option<u32>,
    },
    /// Central-combination order for one (n, m, p)
    Theorem0 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
    },
    /// Integer-coefficient combination divisibility over a prime range
    Corollary {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Unit-set symmetric-function identities: Newton-Girard closure,
    /// power-sum reconstruction of sigma, and the product-ratio identity
    /// for each a in --alist
    Symfunc {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        q_exp: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        alist: Vec<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `PADBIN_MAX_BQ` caps the symmetric-function instance size b*q (the
/// exact sigma arithmetic has lcm-like denominator growth). The unit-set
/// size is about half of b*q.
fn bq_cap() -> Result<u64, String> {
    match std::env::var("PADBIN_MAX_BQ") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or(format!("PADBIN_MAX_BQ must be a positive integer, got {s:?}")),
        Err(std::env::VarError::NotPresent) => Ok(1200),
        Err(e) => Err(format!("PADBIN_MAX_BQ is unreadable: {e}")),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let threads = cli.threads as usize;
    let is_sequence = matches!(cli.cmd, Cmd::Sequence { .. });
    if cli.format == Format::Bfile && !is_sequence {
        return Err("--format bfile is only valid for the sequence subcommand".into());
    }
    let records = match cli.cmd {
        Cmd::Verify(VerifyCmd::Jacobsthal { a, b, p_min, p_max }) => {
            jacobsthal_records(a, b, p_min, p_max, threads)?
        }
        Cmd::Verify(VerifyCmd::Theorem1 { a, b, alist, p, q_exp, k_work }) => {
            theorem1_records(a, b, alist, p, q_exp, k_work)?
        }
        Cmd::Verify(VerifyCmd::Theorem0 { n, m, p }) => theorem0_records(n, m, p)?,
        Cmd::Verify(VerifyCmd::Corollary { n, p_min, p_max }) => {
            combination_records("corollary", n, p_min, p_max, threads)?
        }
        Cmd::Coeffs { n } => coeffs_records(n)?,
        Cmd::Sequence { n, p_min, p_max } => {
            combination_records("sequence", n, p_min, p_max, threads)?
        }
        Cmd::Mobius { a, b, m_max, signed, refined } => {
            mobius_records(a, b, m_max, signed, refined, threads)?
        }
        Cmd::Wolstenholme { p_max } => wolstenholme_records(p_max, threads),
        Cmd::Oracle(OracleCmd::Symfunc { b, q_exp, p, alist }) => {
            symfunc_records(b, q_exp, p, alist)?
        }
    };
    emit(records, cli.format, cli.fail_fast)
}

fn emit(mut records: Vec<CheckRecord>, format: Format, fail_fast: bool) -> Result<ExitCode, String> {
    if fail_fast {
        if let Some(first_bad) = records.iter().position(|r| !r.pass) {
            records.truncate(first_bad + 1);
        }
    }
    let all_pass = records.iter().all(|r| r.pass);
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    // A failed write (e.g. closed pipe) just stops the stream; the exit
    // code still reflects the verification outcome.
    let _ = (|| -> std::io::Result<()> {
        match format {
            Format::Jsonl => {
                for rec in &records {
                    writeln!(out, "{}", rec.to_jsonl())?;
                }
            }
            Format::Csv => {
                writeln!(out, "{}", CheckRecord::csv_header())?;
                for rec in &records {
                    writeln!(out, "{}", rec.to_csv_row())?;
                }
            }
            Format::Bfile => {
                // "index value" per line, index = ordinal within the sweep;
                // records without a quotient (failures) emit nothing, the
                // exit code carries the news.
                for (idx, rec) in records.iter().enumerate() {
                    if let Some(q) = &rec.quotient {
                        writeln!(out, "{} {}", idx + 1, q)?;
                    }
                }
            }
        }
        out.flush()
    })();
    Ok(ExitCode::from(u8::from(!all_pass)))
}

fn jacobsthal_records(
    a: u64,
    b: u64,
    p_min: u64,
    p_max: u64,
    threads: usize,
) -> Result<Vec<CheckRecord>, String> {
    if b == 0 || a <= b {
        return Err(format!("need a > b > 0, got a = {a}, b = {b}"));
    }
    a.checked_mul(p_max)
        .ok_or(format!("a * p overflows for a = {a}, p up to {p_max}"))?;
    let ps = primes_in(p_min.max(5), p_max);
    Ok(sweep::parallel_map(ps, threads, |&p| {
        let ratio = modified_binomial_exact(a * p, b * p, p)
            .expect("arguments validated, p prime");
        let shifted = ratio - Rational::one();
        let required = 3 + i64::from(
            valuation_u64(a, p) + valuation_u64(b, p) + valuation_u64(a - b, p),
        );
        CheckRecord::order_check(
            "jacobsthal",
            vec![("a", a as i128), ("b", b as i128), ("p", p as i128)],
            rational_valuation(&shifted, p).into(),
            required,
        )
    }))
}

fn theorem1_records(
    a: u64,
    b: u64,
    alist: Vec<u64>,
    p: u64,
    q_exp: u32,
    k_work: Option<u32>,
) -> Result<Vec<CheckRecord>, String> {
    let inst = ApproxInstance::new(p, q_exp, b, a, alist).map_err(|e| e.to_string())?;
    let predicted = predicted_order(&inst).map_err(|e| e.to_string())?;
    let k = match k_work {
        Some(k) => k,
        None => u32::try_from(predicted)
            .map_err(|_| "predicted order too large for a working precision".to_string())?
            + DEFAULT_PRECISION_MARGIN,
    };
    let max_units = (bq_cap()? / 2) as usize;
    let report = analyze(&inst, Some(k), max_units).map_err(|e| e.to_string())?;
    // The record's observed order folds both routes: the exact additive
    // order and the (precision-capped) multiplicative order. pass is
    // `min >= predicted`, matching the analysis verdict.
    let observed = match report.additive {
        Valuation::Finite(v) => Order::Finite(v.min(i64::from(report.multiplicative.order))),
        Valuation::Infinite => Order::Finite(i64::from(report.multiplicative.order)),
    };
    let rec = CheckRecord::order_check(
        "theorem1",
        vec![
            ("a", a as i128),
            ("b", b as i128),
            ("p", p as i128),
            ("q_exp", q_exp as i128),
            ("n", inst.n() as i128),
            ("k_work", k as i128),
        ],
        observed,
        predicted as i64,
    );
    debug_assert_eq!(rec.pass, report.pass);
    Ok(vec![rec])
}

fn theorem0_records(n: u64, m: u64, p: u64) -> Result<Vec<CheckRecord>, String> {
    let sum = combo_sum(n, m, p).map_err(|e| e.to_string())?;
    let required = (2 * n + 1) * u64::from(valuation_u64(m, p));
    let mut rec = CheckRecord::order_check(
        "theorem0",
        vec![("n", n as i128), ("m", m as i128), ("p", p as i128)],
        rational_valuation(&sum, p).into(),
        required as i64,
    );
    if sum.is_integer() {
        rec = rec.with_value(sum.numer().to_string());
    }
    Ok(vec![rec])
}

/// Shared by `verify corollary` and `sequence`: per prime, the integer
/// combination sum c_i C(ip, p), its p-order against 2n+1, and the exact
/// quotient when divisible.
fn combination_records(
    check: &'static str,
    n: u64,
    p_min: u64,
    p_max: u64,
    threads: usize,
) -> Result<Vec<CheckRecord>, String> {
    if n == 0 {
        return Err("n must be at least 1".into());
    }
    if n > 40 {
        return Err(format!("n is capped at 40, got {n}"));
    }
    let ps = primes_in(p_min.max(2 * n + 2), p_max);
    Ok(sweep::parallel_map(ps, threads, |&p| {
        let value = combo_value(n, p).expect("n and p validated");
        let required = (2 * n + 1) as i64;
        let observed: Order = valuation(&value, p).into();
        let mut rec = CheckRecord::order_check(
            check,
            vec![("n", n as i128), ("p", p as i128)],
            observed,
            required,
        )
        .with_value(value.to_string());
        if rec.pass {
            let modulus = Integer::from(p).pow(2 * n as u32 + 1);
            let (quot, rem) = value.div_rem(&modulus);
            debug_assert!(rem.is_zero());
            rec = rec.with_quotient(quot.to_string());
        }
        rec
    }))
}

fn coeffs_records(n: u64) -> Result<Vec<CheckRecord>, String> {
    if n == 0 {
        return Err("n must be at least 1".into());
    }
    if n > 40 {
        return Err(format!("n is capped at 40, got {n}"));
    }
    let data = c_coefficients(n);
    let l_small = data
        .l
        .to_i128()
        .ok_or("normalizer does not fit a 128-bit integer")?;
    let c_list = data
        .c
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let rec = CheckRecord::identity_check(
        "coeffs",
        vec![("n", n as i128), ("L", l_small)],
        true,
    )
    .with_value(c_list);
    Ok(vec![rec])
}

fn mobius_records(
    a: u64,
    b: u64,
    m_max: u64,
    signed: bool,
    refined: bool,
    threads: usize,
) -> Result<Vec<CheckRecord>, String> {
    if b == 0 || a <= b {
        return Err(format!("need a > b > 0, got a = {a}, b = {b}"));
    }
    if m_max == 0 {
        return Err("m-max must be at least 1".into());
    }
    a.checked_mul(m_max)
        .ok_or(format!("a * m overflows for a = {a}, m up to {m_max}"))?;
    let check: &'static str = if signed { "mobius-signed" } else { "mobius" };
    let ms: Vec<u64> = (1..=m_max).collect();
    Ok(sweep::parallel_map(ms, threads, |&m| {
        let report: DivisorSumReport = if signed {
            signed_divisor_sum_check(a, b, m, refined)
        } else {
            divisor_sum_check(a, b, m, refined)
        }
        .expect("arguments validated");
        // Composite moduli have one order condition per prime; the record
        // carries the minimum margin, normalized so required = 0.
        let min_margin = report
            .per_prime
            .iter()
            .map(|&(_, observed, needed)| match observed {
                Valuation::Finite(v) => Order::Finite(v - needed as i64),
                Valuation::Infinite => Order::Infinite,
            })
            .fold(Order::Infinite, |acc, margin| match (acc, margin) {
                (Order::Infinite, x) | (x, Order::Infinite) => x,
                (Order::Finite(x), Order::Finite(y)) => Order::Finite(x.min(y)),
            });
        let mut rec = CheckRecord::order_check(
            check,
            vec![
                ("a", a as i128),
                ("b", b as i128),
                ("m", m as i128),
                ("factor", report.factor as i128),
            ],
            min_margin,
            0,
        )
        .with_value(report.sum.to_string());
        debug_assert_eq!(rec.pass, report.pass);
        if rec.pass {
            let product = &report.sum * Integer::from(report.factor);
            let (quot, rem) = product.div_rem(&Integer::from(m).pow(3));
            debug_assert!(rem.is_zero());
            rec = rec.with_quotient(quot.to_string());
        }
        rec
    }))
}

fn wolstenholme_records(p_max: u64, threads: usize) -> Vec<CheckRecord> {
    let ps = primes_in(5, p_max);
    sweep::parallel_map(ps, threads, |&p| {
        // Order is computed mod p^4, so an observed 4 means "at least 4";
        // a passing record is a fourth-order prime.
        let order = wolstenholme_order(p).expect("p validated prime > 3");
        CheckRecord::order_check(
            "wolstenholme",
            vec![("p", p as i128)],
            Order::Finite(i64::from(order)),
            4,
        )
    })
}

fn symfunc_records(
    b: u64,
    q_exp: u32,
    p: u64,
    alist: Vec<u64>,
) -> Result<Vec<CheckRecord>, String> {
    if q_exp == 0 {
        return Err("q-exp must be at least 1".into());
    }
    let q = p
        .checked_pow(q_exp)
        .ok_or(format!("p^{q_exp} overflows for p = {p}"))?;
    let cap = bq_cap()?;
    let bq = b
        .checked_mul(q)
        .filter(|&bq| bq <= cap)
        .ok_or(format!("instance size b*q exceeds PADBIN_MAX_BQ = {cap}"))?;
    let _ = bq;
    for &a in &alist {
        if a < b {
            return Err(format!("every entry of alist must be >= b, got {a} < {b}"));
        }
        a.checked_mul(q)
            .ok_or(format!("a * q overflows for a = {a}"))?;
    }
    let set = build_unit_set(b, q, p).map_err(|e| e.to_string())?;
    let depth = set.count().min(8);
    let data = sym_data(&set, depth);
    let base_inputs = vec![("b", b as i128), ("p", p as i128), ("q_exp", q_exp as i128)];

    let mut inputs = base_inputs.clone();
    inputs.push(("depth", depth as i128));
    let mut recs = vec![CheckRecord::identity_check(
        "newton-girard",
        inputs,
        newton_girard_check(&data, depth),
    )];

    let compose_depth = set.count().min(6);
    let composed_ok = (1..=compose_depth)
        .all(|d| sigma_from_power_sums(&data.powersums, d) == data.sigma[d]);
    let mut inputs = base_inputs.clone();
    inputs.push(("depth", compose_depth as i128));
    recs.push(CheckRecord::identity_check(
        "sigma-compose",
        inputs,
        composed_ok,
    ));

    for &a in &alist {
        let holds = binomial_ratio_check(a, b, q, p).map_err(|e| e.to_string())?;
        let mut inputs = vec![("a", a as i128)];
        inputs.extend(base_inputs.iter().copied());
        recs.push(CheckRecord::identity_check("binomial-ratio", inputs, holds));
    }
    Ok(recs)
}
