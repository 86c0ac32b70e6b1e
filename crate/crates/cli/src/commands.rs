//! Subcommand handlers and output rendering.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use holte_core::cascade::{
    avoidance_brute_force_with_budget, avoidance_sequence, restrict, BinaryChain, CascadeError,
    CascadeSpec, ThresholdVerdict,
};
use holte_core::classify::{charpoly_similar, moduli_space, ClassifyError, MarkovCarrySystem};
use holte_core::eigensys::EigenSystem;
use holte_core::exactnum::{factorial, parse_rational, ExactRational, RatMatrix, RatPolynomial};
use holte_core::holte::{build_holte, stationary_distribution, HolteSystem};

use crate::{CliError, Command, OutputFormat};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Spectrum { k, base, format, out } => spectrum(k, base, format, &out),
        Command::Eigensystem { k, format, out } => eigensystem(k, format, &out),
        Command::Matrix { k, base, format, out } => matrix(k, base, format, &out),
        Command::Cascade {
            k,
            base,
            forbid,
            chain,
            len,
            oracle,
            budget,
            format,
            out,
        } => cascade(k, base, &forbid, chain, len, oracle, budget, format, &out),
        Command::Threshold {
            k,
            base,
            forbid,
            format,
            out,
        } => threshold(k, base, &forbid, format, &out),
        Command::Moduli {
            nmax,
            dmax,
            format,
            out,
        } => moduli(nmax, dmax, format, &out),
        Command::Classify { a, b, format, out } => classify(&a, &b, format, &out),
        Command::Verify {
            grid_kmax,
            grid_bases,
            budget,
            inject_fault,
            format,
            out,
        } => crate::verify::run_verify(grid_kmax, &grid_bases, budget, inject_fault, format, &out),
    }
}

pub fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    let content = if content.ends_with('\n') {
        content.to_string()
    } else {
        format!("{content}\n")
    };
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_chain_params(k: usize, base: u32) -> Result<(), CliError> {
    if k < 2 {
        return Err(usage("k must be at least 2"));
    }
    if base < 2 {
        return Err(usage("base must be at least 2"));
    }
    Ok(())
}

fn build_system(k: usize, base: u32) -> Result<HolteSystem, CliError> {
    check_chain_params(k, base)?;
    Ok(build_holte(k, base))
}

fn rationals_to_strings(values: &[ExactRational]) -> Vec<String> {
    values.iter().map(ExactRational::to_string).collect()
}

fn poly_coeff_strings(p: &RatPolynomial) -> Vec<String> {
    p.coeffs().iter().map(ExactRational::to_string).collect()
}

fn poly_coeff_json(p: &RatPolynomial) -> Value {
    Value::Array(
        poly_coeff_strings(p)
            .into_iter()
            .map(Value::String)
            .collect(),
    )
}

/// Integer-valued rational to a JSON number; errors when it does not fit.
fn integer_json(value: &ExactRational) -> Result<Value, CliError> {
    if !value.is_integer() {
        return Err(usage("expected an integer value"));
    }
    let as_int = value.to_integer();
    i64::try_from(&as_int)
        .map(|v| json!(v))
        .map_err(|_| usage("value too large for an integer report; reduce k or the base"))
}

// ---------------------------------------------------------------------------
// spectrum

fn spectrum(k: usize, base: u32, format: OutputFormat, out: &Option<PathBuf>) -> Result<(), CliError> {
    check_chain_params(k, base)?;
    let sys = EigenSystem::new(k).map_err(|e| CliError::Check(e.to_string()))?;
    let kf = factorial(k);
    let scaled: Vec<ExactRational> = stationary_distribution(k)
        .iter()
        .map(|p| p * ExactRational::from_integer(kf.clone()))
        .collect();
    let eulerian: Vec<String> = holte_core::exactnum::eulerian_row(k)
        .iter()
        .map(|v| v.to_string())
        .collect();
    let eigenvalues = rationals_to_strings(&sys.eigenvalues(base));
    match format {
        OutputFormat::Json => {
            let scaled_json: Result<Vec<Value>, CliError> =
                scaled.iter().map(integer_json).collect();
            let doc = json!({
                "k": k,
                "N": base,
                "data": {
                    "stationary_scaled": scaled_json?,
                    "eulerian": eulerian,
                    "eigenvalues": eigenvalues,
                },
                "anchors": ["eulerian-stationary", "eigenvalue-product"],
            });
            write_output(out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        OutputFormat::Text => {
            let mut s = format!("carry spectrum  k={k}  base={base}\n");
            s += &format!("stationary*k!: {}\n", join_rationals(&scaled));
            s += &format!("eulerian row:  {}\n", eulerian.join(" "));
            s += &format!("eigenvalues:   {}\n", eigenvalues.join(" "));
            write_output(out, &s)
        }
        OutputFormat::Csv => {
            let mut s = String::from("j,stationary_scaled,eulerian,eigenvalue\n");
            for j in 0..k {
                s += &format!("{j},{},{},{}\n", scaled[j], eulerian[j], eigenvalues[j]);
            }
            write_output(out, &s)
        }
        OutputFormat::Bfile => Err(usage("spectrum supports json, text, or csv")),
    }
}

fn join_rationals(values: &[ExactRational]) -> String {
    rationals_to_strings(values).join(" ")
}

// ---------------------------------------------------------------------------
// eigensystem

fn eigensystem(k: usize, format: OutputFormat, out: &Option<PathBuf>) -> Result<(), CliError> {
    if k < 2 {
        return Err(usage("k must be at least 2"));
    }
    let sys = EigenSystem::new(k).map_err(|e| CliError::Check(e.to_string()))?;
    let kf = ExactRational::from_integer(factorial(k));
    let scaled_left: Vec<Vec<ExactRational>> = (0..k)
        .map(|j| sys.left(j).iter().map(|u| u * &kf).collect())
        .collect();
    match format {
        OutputFormat::Json => {
            let left_json: Result<Vec<Value>, CliError> = scaled_left
                .iter()
                .map(|row| {
                    row.iter()
                        .map(integer_json)
                        .collect::<Result<Vec<_>, _>>()
                        .map(Value::Array)
                })
                .collect();
            let doc = json!({
                "k": k,
                "N": Value::Null,
                "data": {
                    "scale": kf.to_string(),
                    "scaled_left": left_json?,
                    "right": (0..k).map(|j| rationals_to_strings(sys.right(j))).collect::<Vec<_>>(),
                    "quotients": (0..k).map(|j| poly_coeff_strings(sys.quotient(j))).collect::<Vec<_>>(),
                },
                "anchors": [
                    "stirling-eulerian-factorization",
                    "binomial-palindromic",
                    "biorthogonality",
                ],
            });
            write_output(out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        OutputFormat::Text => {
            let rows: Vec<[String; 4]> = (0..k)
                .map(|j| {
                    [
                        j.to_string(),
                        join_rationals(&scaled_left[j]),
                        join_rationals(sys.right(j)),
                        format!("[{}]", poly_coeff_strings(sys.quotient(j)).join(", ")),
                    ]
                })
                .collect();
            let mut widths = [1usize, 1, 1, 1];
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut s = format!(
                "biorthogonal eigenvector system  k={k}  (left vectors scaled by {kf})\n"
            );
            let headers = ["j", "scaled left", "right", "quotient coefficients"];
            for (w, h) in widths.iter_mut().zip(headers) {
                *w = (*w).max(h.len());
            }
            s += &format!(
                "{:w0$} | {:w1$} | {:w2$} | {:w3$}\n",
                headers[0],
                headers[1],
                headers[2],
                headers[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2],
                w3 = widths[3],
            );
            for row in &rows {
                s += &format!(
                    "{:w0$} | {:w1$} | {:w2$} | {:w3$}\n",
                    row[0],
                    row[1],
                    row[2],
                    row[3],
                    w0 = widths[0],
                    w1 = widths[1],
                    w2 = widths[2],
                    w3 = widths[3],
                );
            }
            write_output(out, &s)
        }
        OutputFormat::Csv => {
            let mut s = String::from("j,scaled_left,right,quotient\n");
            for j in 0..k {
                s += &format!(
                    "{j},{},{},{}\n",
                    rationals_to_strings(&scaled_left[j]).join(" "),
                    rationals_to_strings(sys.right(j)).join(" "),
                    poly_coeff_strings(sys.quotient(j)).join(" "),
                );
            }
            write_output(out, &s)
        }
        OutputFormat::Bfile => Err(usage("eigensystem supports json, text, or csv")),
    }
}

// ---------------------------------------------------------------------------
// matrix

fn matrix(k: usize, base: u32, format: OutputFormat, out: &Option<PathBuf>) -> Result<(), CliError> {
    let sys = build_system(k, base)?;
    let entries = sys
        .count_matrix()
        .integer_entries()
        .expect("count matrix is integral");
    match format {
        OutputFormat::Json => {
            let rows: Result<Vec<Value>, CliError> = entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| {
                            u64::try_from(v).map(|x| json!(x)).map_err(|_| {
                                usage("matrix entries exceed the integer JSON range")
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()
                        .map(Value::Array)
                })
                .collect();
            let doc = json!({
                "k": k,
                "N": base,
                "count_matrix": rows?,
            });
            write_output(out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        OutputFormat::Csv => {
            let mut s = String::new();
            for row in &entries {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                s += &cells.join(",");
                s.push('\n');
            }
            write_output(out, &s)
        }
        OutputFormat::Text => {
            let mut s = format!("count matrix  k={k}  base={base}  (columns sum to {})\n", sys.tuple_count());
            for row in &entries {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                s += &format!("  {}\n", cells.join(" "));
            }
            write_output(out, &s)
        }
        OutputFormat::Bfile => Err(usage("matrix supports json, csv, or text")),
    }
}

// ---------------------------------------------------------------------------
// cascade

enum SequenceSource {
    Restriction(Box<CascadeSpec>),
    Chain(BinaryChain),
}

#[allow(clippy::too_many_arguments)]
fn cascade(
    k: Option<usize>,
    base: u32,
    forbid: &[usize],
    chain: Option<Vec<u32>>,
    len: u32,
    oracle: bool,
    budget: u128,
    format: OutputFormat,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let source = match chain {
        Some(parts) => {
            let [g, t, r] = parts[..] else {
                return Err(usage("--chain expects exactly g,t,r"));
            };
            if oracle {
                return Err(usage("--oracle applies to --k/--forbid restrictions only"));
            }
            SequenceSource::Chain(
                BinaryChain::new(base, g, t, r).map_err(|e| usage(e.to_string()))?,
            )
        }
        None => {
            let k = k.ok_or_else(|| usage("provide --k with --forbid, or --chain g,t,r"))?;
            if forbid.is_empty() {
                return Err(usage("provide at least one forbidden state via --forbid"));
            }
            let sys = build_system(k, base)?;
            let f: BTreeSet<usize> = forbid.iter().copied().collect();
            SequenceSource::Restriction(Box::new(
                restrict(&sys, &f).map_err(|e| usage(e.to_string()))?,
            ))
        }
    };
    let seq: Vec<String> = match &source {
        SequenceSource::Restriction(spec) => avoidance_sequence(spec.as_ref(), len),
        SequenceSource::Chain(c) => avoidance_sequence(c, len),
    }
    .iter()
    .map(|v| v.to_string())
    .collect();

    if oracle {
        let SequenceSource::Restriction(spec) = &source else {
            unreachable!("oracle rejected for chains above");
        };
        let f = spec.forbidden();
        for (l, expected) in seq.iter().enumerate() {
            let brute =
                avoidance_brute_force_with_budget(spec.summands(), base, f, l as u32, budget)
                    .map_err(|e| match e {
                        CascadeError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
                        other => CliError::Usage(other.to_string()),
                    })?;
            if &brute.to_string() != expected {
                return Err(CliError::Check(format!(
                    "oracle disagreement at length {l}: matrix {expected}, brute force {brute}"
                )));
            }
        }
    }

    match format {
        OutputFormat::Text => write_output(out, &seq.join(" ")),
        OutputFormat::Bfile => {
            let mut s = String::new();
            for (i, v) in seq.iter().enumerate() {
                s += &format!("{i} {v}\n");
            }
            write_output(out, &s)
        }
        OutputFormat::Csv => {
            let mut s = String::from("index,value\n");
            for (i, v) in seq.iter().enumerate() {
                s += &format!("{i},{v}\n");
            }
            write_output(out, &s)
        }
        OutputFormat::Json => {
            let doc = match &source {
                SequenceSource::Restriction(spec) => json!({
                    "k": spec.summands(),
                    "N": base,
                    "forbid": spec.forbidden().iter().copied().collect::<Vec<_>>(),
                    "data": seq,
                    "anchors": ["cascade-avoidance", "transfer-recurrence"],
                }),
                SequenceSource::Chain(c) => json!({
                    "N": base,
                    "chain": [c.generate(), c.propagate(), c.kill()],
                    "data": seq,
                    "anchors": ["cascade-avoidance", "transfer-recurrence"],
                }),
            };
            write_output(out, &serde_json::to_string_pretty(&doc).unwrap())
        }
    }
}

// ---------------------------------------------------------------------------
// threshold

fn threshold(
    k: usize,
    base: u32,
    forbid: &[usize],
    format: OutputFormat,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    if forbid.is_empty() {
        return Err(usage("provide at least one forbidden state via --forbid"));
    }
    let sys = build_system(k, base)?;
    let f: BTreeSet<usize> = forbid.iter().copied().collect();
    let spec = restrict(&sys, &f).map_err(|e| usage(e.to_string()))?;
    let verdict = holte_core::cascade::threshold_classify(&spec);
    let chi = spec.restricted_count().char_poly();

    let mut notes: Vec<String> = Vec::new();
    let tail: BTreeSet<usize> = [k - 1].into_iter().collect();
    let tail2: BTreeSet<usize> = [k - 2, k - 1].into_iter().collect();
    if f != tail && f != tail2 {
        notes.push(
            "forbidden set outside the tail convention; verdict computed from the generic principal restriction"
                .to_string(),
        );
    }
    if spec.dimension() == 1 {
        notes.push(format!(
            "one retained state: the rate is the count-matrix entry {} (counts digit tuples, not single digits)",
            spec.restricted_count().get(0, 0)
        ));
    }

    let mut data = serde_json::Map::new();
    data.insert("kind".into(), json!(verdict.kind()));
    data.insert("d".into(), json!(spec.dimension()));
    data.insert("char_poly".into(), poly_coeff_json(&chi));
    match &verdict {
        ThresholdVerdict::Geometric { rate } => {
            data.insert("rate".into(), json!(rate.to_string()));
        }
        ThresholdVerdict::Chebyshev { trace, determinant } => {
            data.insert("trace".into(), json!(trace.to_string()));
            data.insert("determinant".into(), json!(determinant.to_string()));
        }
        ThresholdVerdict::NoChebyshev { certificates }
        | ThresholdVerdict::Undetermined { certificates } => {
            data.insert("denominator".into(), poly_coeff_json(&certificates.denominator));
            data.insert("numerator".into(), poly_coeff_json(&certificates.numerator));
            data.insert(
                "char_squarefree_gcd".into(),
                poly_coeff_json(&certificates.char_squarefree_gcd),
            );
            data.insert(
                "residue_gcd".into(),
                poly_coeff_json(&certificates.residue_gcd),
            );
            data.insert(
                "h1_simple_spectrum".into(),
                json!(certificates.simple_spectrum),
            );
            data.insert(
                "h2_nonvanishing_residues".into(),
                json!(certificates.nonvanishing_residues),
            );
            data.insert(
                "reduced_denominator_degree".into(),
                json!(certificates.reduced_denominator_degree),
            );
        }
    }
    data.insert("notes".into(), json!(notes));

    match format {
        OutputFormat::Json => {
            let doc = json!({
                "k": k,
                "N": base,
                "forbid": f.iter().copied().collect::<Vec<_>>(),
                "data": Value::Object(data),
                "anchors": ["chebyshev-threshold", "stirling-lagrange"],
            });
            write_output(out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        OutputFormat::Text => {
            let mut s = format!(
                "threshold verdict  k={k}  base={base}  forbid={{{}}}\n",
                f.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            s += &format!("kind: {}\n", verdict.kind());
            s += &format!("d:    {}\n", spec.dimension());
            s += &format!("char poly: {}\n", chi.to_text("x"));
            match &verdict {
                ThresholdVerdict::Geometric { rate } => {
                    s += &format!("rate: {rate}\n");
                }
                ThresholdVerdict::Chebyshev { trace, determinant } => {
                    s += &format!("trace: {trace}\ndeterminant: {determinant}\n");
                }
                ThresholdVerdict::NoChebyshev { certificates }
                | ThresholdVerdict::Undetermined { certificates } => {
                    s += &format!("denominator: {}\n", certificates.denominator.to_text("z"));
                    s += &format!("numerator:   {}\n", certificates.numerator.to_text("z"));
                    s += &format!(
                        "simple spectrum: {}  nonvanishing residues: {}\n",
                        certificates.simple_spectrum, certificates.nonvanishing_residues
                    );
                    s += &format!(
                        "reduced denominator degree: {}\n",
                        certificates.reduced_denominator_degree
                    );
                }
            }
            for n in &notes {
                s += &format!("note: {n}\n");
            }
            write_output(out, &s)
        }
        _ => Err(usage("threshold supports json or text")),
    }
}

// ---------------------------------------------------------------------------
// moduli

fn moduli(nmax: u32, dmax: u64, format: OutputFormat, out: &Option<PathBuf>) -> Result<(), CliError> {
    if nmax < 1 {
        return Err(usage("nmax must be at least 1"));
    }
    let grid = moduli_space(nmax, dmax);
    match format {
        OutputFormat::Csv => {
            let mut s = String::from("N,d,status,g,t\n");
            for p in &grid {
                let (g, t) = match p.witness {
                    Some((g, t)) => (g.to_string(), t.to_string()),
                    None => (String::new(), String::new()),
                };
                s += &format!("{},{},{},{},{}\n", p.base, p.determinant, p.status.as_str(), g, t);
            }
            write_output(out, &s)
        }
        OutputFormat::Json => {
            let data: Vec<Value> = grid
                .iter()
                .map(|p| {
                    json!({
                        "N": p.base,
                        "d": p.determinant,
                        "status": p.status.as_str(),
                        "g": p.witness.map(|w| w.0),
                        "t": p.witness.map(|w| w.1),
                    })
                })
                .collect();
            let doc = json!({
                "nmax": nmax,
                "dmax": dmax,
                "data": data,
                "anchors": ["moduli-sigma"],
            });
            write_output(out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        _ => Err(usage("moduli supports csv or json")),
    }
}

// ---------------------------------------------------------------------------
// classify

fn parse_matrix_file(path: &Path) -> Result<RatMatrix, CliError> {
    let raw = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&raw)
        .map_err(|e| usage(format!("{}: invalid JSON: {e}", path.display())))?;
    let rows_value = match &value {
        Value::Array(_) => &value,
        Value::Object(map) => map
            .get("matrix")
            .ok_or_else(|| usage(format!("{}: expected a \"matrix\" field", path.display())))?,
        _ => return Err(usage(format!("{}: expected a matrix", path.display()))),
    };
    let Value::Array(rows) = rows_value else {
        return Err(usage(format!("{}: matrix must be an array of rows", path.display())));
    };
    let mut parsed: Vec<Vec<ExactRational>> = Vec::new();
    for row in rows {
        let Value::Array(cells) = row else {
            return Err(usage(format!("{}: each row must be an array", path.display())));
        };
        let mut out_row = Vec::new();
        for cell in cells {
            let rational = match cell {
                Value::Number(n) => {
                    let as_int = n
                        .as_i64()
                        .ok_or_else(|| usage("matrix entries must be integers or \"p/q\" strings"))?;
                    ExactRational::from_integer(as_int.into())
                }
                Value::String(s) => parse_rational(s)
                    .map_err(|e| usage(format!("bad rational {s:?}: {e}")))?,
                _ => return Err(usage("matrix entries must be integers or \"p/q\" strings")),
            };
            out_row.push(rational);
        }
        parsed.push(out_row);
    }
    let rows_n = parsed.len();
    if rows_n == 0 || parsed.iter().any(|r| r.len() != rows_n) {
        return Err(usage(format!("{}: matrix must be square", path.display())));
    }
    Ok(RatMatrix::new(
        rows_n,
        rows_n,
        parsed.into_iter().flatten().collect(),
    ))
}

fn classify(a: &Path, b: &Path, format: OutputFormat, out: &Option<PathBuf>) -> Result<(), CliError> {
    let ma = parse_matrix_file(a)?;
    let mb = parse_matrix_file(b)?;
    // Validate stochasticity when it holds; plain matrices are still compared.
    let stochastic =
        MarkovCarrySystem::new(ma.clone()).is_ok() && MarkovCarrySystem::new(mb.clone()).is_ok();
    let equivalent = charpoly_similar(&ma, &mb).map_err(|e| match e {
        ClassifyError::NonSimpleSpectrum => CliError::Check(e.to_string()),
        other => usage(other.to_string()),
    })?;
    let chi_a = ma.char_poly();
    let chi_b = mb.char_poly();
    match format {
        OutputFormat::Json => {
            let doc = json!({
                "equivalent": equivalent,
                "char_poly_a": poly_coeff_json(&chi_a),
                "char_poly_b": poly_coeff_json(&chi_b),
                "column_stochastic": stochastic,
                "anchors": ["measure-classes"],
            });
            write_output(out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        OutputFormat::Text => {
            let mut s = String::new();
            s += &format!("char poly A: {}\n", chi_a.to_text("x"));
            s += &format!("char poly B: {}\n", chi_b.to_text("x"));
            s += &format!("column stochastic: {stochastic}\n");
            s += &format!("equivalent: {equivalent}\n");
            write_output(out, &s)
        }
        _ => Err(usage("classify supports json or text")),
    }
}
