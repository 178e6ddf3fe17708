//! Command-line surface. [`run`] returns the process exit code: 0 on success, 1 when a
//! verification fails, 2 on usage, parse and size-limit errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde_json::json;

use crate::approxdeg::{assemble_bpm_approximant, bpm_degree_bound, parse_rational, DegreeBoundReport};
use crate::bigraph::BipartiteGraph;
use crate::coeff::{binomial, dual_coefficient};
use crate::error::{Error, Result};
use crate::oracle::{
    bpm_star_value, coefficient_table, elementary_sum_coefficient, mc_chi_sum_coefficient, mobius_coefficient,
    permitted_sum_coefficient,
};
use crate::polyspace::{asymptotic_ratio, materialize, max_abs_coefficient, monomial_count, DualPolynomial};
use crate::sensitivity::{construct_path_input, sensitivity_at};

const CAPS: &str = "Size caps: poly n <= 4; verify n <= 4 (5 with --huge); count n <= 10; \
sens n <= 16; apxdeg n <= 64 (--assemble n <= 3); coeff --method mobius |E| <= 25, \
chisum/elemsum n <= 4, permitted n <= 5.";

#[derive(Parser, Debug)]
#[command(name = "bpm-dual", version, about = "Exact dual coefficients of bipartite perfect matching", after_help = CAPS)]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dual coefficient of one graph.
    Coeff {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Dump the full polynomial (n <= 4).
    Poly {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed form against the Möbius table, and the polynomial against BPM* everywhere.
    Verify {
        #[arg(long)]
        n: usize,
        /// Acknowledge the 2^25-entry table at n = 5.
        #[arg(long)]
        huge: bool,
    },
    /// Monomial count and coefficient magnitude with their bounds.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Sensitivity of BPM_n at the two-path input.
    Sens {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Approximate-degree bound; `--assemble` also certifies the approximant (n <= 3).
    Apxdeg {
        #[arg(long)]
        n: usize,
        /// Rational error as `p/q`.
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        assemble: bool,
    },
    /// Value of a polynomial dump at a graph.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Formula,
    Mobius,
    Chisum,
    Elemsum,
    Permitted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, S>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(cli.command, out, err)) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Verification(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Coeff { graph, method } => cmd_coeff(&graph, method, out),
        Command::Poly { n, format, out: file } => cmd_poly(n, format, file.as_deref(), out),
        Command::Verify { n, huge } => cmd_verify(n, huge, out),
        Command::Count { n } => cmd_count(n, out),
        Command::Sens { n, format } => cmd_sens(n, format, out),
        Command::Apxdeg { n, eps, format, assemble } => cmd_apxdeg(n, &eps, format, assemble, out, err),
        Command::Eval { graph, poly } => cmd_eval(&graph, &poly, out),
    }
}

fn read_graph(path: &Path) -> std::result::Result<BipartiteGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(BipartiteGraph::parse(&text)?)
}

fn cmd_coeff(path: &Path, method: Method, out: &mut dyn Write) -> CliResult {
    let g = read_graph(path)?;
    let c = match method {
        Method::Formula => dual_coefficient(&g),
        Method::Mobius => mobius_coefficient(&g)?,
        Method::Chisum => mc_chi_sum_coefficient(&g)?,
        Method::Elemsum => elementary_sum_coefficient(&g)?,
        Method::Permitted => permitted_sum_coefficient(&g)?,
    };
    writeln!(out, "{c}")?;
    Ok(())
}

fn cmd_poly(n: usize, format: Format, file: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let p = materialize(n)?;
    let text = match format {
        Format::Tsv => p.to_tsv(),
        Format::Json => p.to_json() + "\n",
    };
    match file {
        Some(f) => std::fs::write(f, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Values of a coefficient vector at every edge set, by the subset zeta transform.
fn zeta(mut f: Vec<i64>, bits: usize) -> Vec<i64> {
    for b in 0..bits {
        let step = 1usize << b;
        f.par_chunks_mut(2 * step).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(step);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h += *l;
            }
        });
    }
    f
}

fn cmd_verify(n: usize, huge: bool, out: &mut dyn Write) -> CliResult {
    let table = coefficient_table(n, huge)?;
    let bits = n * n;
    let size = 1usize << bits;
    let formula: Vec<BigInt> = (0..size as u64)
        .into_par_iter()
        .map(|m| dual_coefficient(&BipartiteGraph::from_mask(n, m).expect("mask in range")))
        .collect();
    let mismatches: Vec<u64> = (0..size as u64)
        .into_par_iter()
        .filter(|&m| table.coefficient(m) != formula[m as usize])
        .collect();
    writeln!(out, "{size} coefficients checked against the Möbius table; {} mismatches", mismatches.len())?;
    let coeffs: Vec<i64> = formula
        .iter()
        .map(|c| i64::try_from(c).map_err(|_| Error::NumericalFailure("coefficient exceeds i64".into())))
        .collect::<Result<_>>()?;
    let values = zeta(coeffs, bits);
    let bad_points = (0..size as u64)
        .into_par_iter()
        .filter(|&m| {
            let g = BipartiteGraph::from_mask(n, m).expect("mask in range");
            values[m as usize] != i64::from(bpm_star_value(&g))
        })
        .count();
    writeln!(out, "{size} evaluation points checked against BPM*; {bad_points} mismatches")?;
    if let Some(m) = mismatches.first() {
        let g = BipartiteGraph::from_mask(n, *m)?;
        return Err(Failure::Verification(format!("closed form differs from the table at\n{g}")));
    }
    if bad_points > 0 {
        return Err(Failure::Verification("representation identity fails".into()));
    }
    writeln!(out, "OK")?;
    Ok(())
}

fn ok(b: bool) -> &'static str {
    if b {
        "OK"
    } else {
        "FAIL"
    }
}

fn cmd_count(n: usize, out: &mut dyn Write) -> CliResult {
    let count = monomial_count(n)?;
    let max = max_abs_coefficient(n)?;
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let upper = num_traits::pow(BigInt::from(n + 2), 2 * n + 2);
    let count_ok = fact.pow(2) <= count && count <= upper;
    let lower_mag = binomial(n as i64 - 1, (n / 2) as i64);
    let mag_ok = (n < 2 || lower_mag <= max) && max <= BigInt::one() << (2 * n);
    writeln!(out, "n\t{n}")?;
    writeln!(out, "monomial_count\t{count}")?;
    writeln!(out, "max_abs_coefficient\t{max}")?;
    writeln!(out, "count_bounds\t{}", ok(count_ok))?;
    writeln!(out, "magnitude_bounds\t{}", ok(mag_ok))?;
    let mut table_ok = true;
    if n <= crate::limits::TABLE_MAX_N {
        let t = coefficient_table(n, false)?.len();
        table_ok = BigInt::from(t) == count;
        writeln!(out, "table_count\t{t}\t{}", ok(table_ok))?;
    }
    if let Some(r) = asymptotic_ratio(n, &count) {
        writeln!(out, "log2_count_over_2nlog2n\t{r:.6}")?;
    }
    if count_ok && mag_ok && table_ok {
        Ok(())
    } else {
        Err(Failure::Verification("count or magnitude bound violated".into()))
    }
}

fn edges_1based(edges: &[(usize, usize)]) -> Vec<[usize; 2]> {
    edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect()
}

fn cmd_sens(n: usize, format: Format, out: &mut dyn Write) -> CliResult {
    let x = construct_path_input(n)?;
    let r = sensitivity_at(&x)?;
    let input = edges_1based(&x.edges());
    let sensitive = edges_1based(&r.sensitive_edges);
    match format {
        Format::Json => {
            let v = json!({
                "n": r.n,
                "input_edges": input,
                "sensitive_edges": sensitive,
                "count": r.count,
                "lower_bound_formula": r.lower_bound_formula,
                "degree_lower_bound": r.degree_lower_bound,
            });
            writeln!(out, "{v}")?;
        }
        Format::Tsv => {
            let list = |es: &[[usize; 2]]| es.iter().map(|[i, j]| format!("({i},{j})")).collect::<Vec<_>>().join(",");
            writeln!(out, "n\tcount\tlower_bound_formula\tdegree_lower_bound\tinput_edges\tsensitive_edges")?;
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.n,
                r.count,
                r.lower_bound_formula,
                r.degree_lower_bound,
                list(&input),
                list(&sensitive)
            )?;
        }
    }
    if r.count < r.lower_bound_formula {
        return Err(Failure::Verification(format!("sensitivity {} below {}", r.count, r.lower_bound_formula)));
    }
    Ok(())
}

fn cmd_apxdeg(
    n: usize,
    eps: &str,
    format: Format,
    assemble: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let eps = parse_rational(eps)?;
    let report = bpm_degree_bound(n, &eps)?;
    if !report.and_in_regime {
        writeln!(err, "warning: eps' = 2^{:.2} lies below the AND regime 2^-{}", report.log2_epsilon_prime, report.and_arity)?;
    }
    if !report.bpm_in_regime {
        writeln!(err, "warning: eps lies below the regime 2^(-n log2 n)")?;
    }
    let assembled = if assemble { Some(assemble_bpm_approximant(n, &eps)?) } else { None };
    match format {
        Format::Tsv => {
            writeln!(out, "{}", DegreeBoundReport::TSV_HEADER)?;
            writeln!(out, "{}", report.tsv_row())?;
            if let Some(a) = &assembled {
                writeln!(out, "assembled_degree\tmax_error\tdual_max_error\treplaced_monomials")?;
                writeln!(out, "{}\t{}\t{}\t{}", a.degree, a.max_error, a.dual_max_error, a.replaced_monomials)?;
            }
        }
        Format::Json => {
            let mut v = serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(a) = &assembled {
                v["assembled"] = json!({
                    "degree": a.degree,
                    "max_error": a.max_error.to_string(),
                    "dual_max_error": a.dual_max_error.to_string(),
                    "replaced_monomials": a.replaced_monomials,
                });
            }
            writeln!(out, "{v}")?;
        }
    }
    if let Some(a) = assembled {
        if a.degree != report.overall_bound.min(n * n) {
            return Err(Failure::Verification(format!(
                "assembled degree {} differs from the bound {}",
                a.degree, report.overall_bound
            )));
        }
    }
    Ok(())
}

fn cmd_eval(graph: &Path, poly: &Path, out: &mut dyn Write) -> CliResult {
    let g = read_graph(graph)?;
    let text = std::fs::read_to_string(poly).map_err(|e| Failure::Usage(format!("{}: {e}", poly.display())))?;
    let p = DualPolynomial::parse_any(g.n(), &text)?;
    let v = p.evaluate(&g)?;
    writeln!(out, "{v}")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("bpm-dual").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn zeta_inverts_mobius() {
        let v = zeta(vec![0, 1, 1, -1], 2);
        assert_eq!(v, vec![0, 1, 1, 1]);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["poly", "--n", "9"]).0, 2);
        assert_eq!(call(&["apxdeg", "--n", "2", "--eps", "0.3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn count_two() {
        let (code, out, _) = call(&["count", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("monomial_count\t9\n"));
        assert!(out.contains("max_abs_coefficient\t1\n"));
    }
}
