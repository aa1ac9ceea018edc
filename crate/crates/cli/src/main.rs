//! `k3rm`: JSON frontend for corestricted lattices, quaternion invariants,
//! Clifford algebras and `SL2^d` characters.

mod input;
mod selftest;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3rm_core::clifford::{even_clifford_quaternary, even_clifford_ternary, CliffordAlgebra};
use k3rm_core::coreslat::{
    discriminant_group, is_even, k3_embeddability, DiscriminantSummary, GramMatrix,
};
use k3rm_core::dictionary::{fourfold_to_k3, k3_to_fourfold, LatticeReport};
use k3rm_core::linalg::QMatrix;
use k3rm_core::quat::{
    corestriction_class, hilbert_q, local_symbols, quaternion_from_class, ram_infinity_condition,
    ramification_q, real_ramification_count, search_bound, BrauerClass, PlaceQ, QuaternionAlgebra,
};
use k3rm_core::rational::{format_rational, parse_rational, RationalRepr};
use k3rm_core::repwt::{decompose, hodge_by_summand, irr_char, ks_representation_report, standard};
use k3rm_core::sample::DEFAULT_SEED;
use k3rm_core::{Error, NumberField};
use serde_json::{json, Value};

use input::{load_field, load_form, load_json, parse_element, CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "k3rm", version, about = "Exact invariants of K3 lattices with real multiplication")]
struct Cli {
    /// Compact single-line JSON instead of pretty-printed output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a totally real field and report its invariants.
    Field {
        /// Minimal polynomial, e.g. "x^2-2" or '["-2","0","1"]'.
        #[arg(long, conflicts_with = "catalog", required_unless_present = "catalog")]
        minpoly: Option<String>,
        /// List the built-in catalog instead.
        #[arg(long)]
        catalog: bool,
    },
    /// Signatures, discriminant and diagonalization of a form over a field.
    Form {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        form: String,
    },
    /// Trace lattice of a form with its discriminant group and K3 embeddability.
    Corestrict {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        form: String,
        /// Rescale the form by 2 before corestricting.
        #[arg(long)]
        double: bool,
    },
    /// Invariants of a rational Gram matrix.
    Lattice {
        /// Gram matrix as a JSON array of rows.
        #[arg(long)]
        gram: String,
    },
    /// Rational Hilbert symbol (a,b)_v, the ramification set when no place is
    /// given, or a representative (a,b) for a ramification set given by --class.
    Hilbert {
        #[arg(short, allow_hyphen_values = true, required_unless_present = "class", requires = "b")]
        a: Option<String>,
        #[arg(short, allow_hyphen_values = true, requires = "a")]
        b: Option<String>,
        /// A prime or "inf".
        #[arg(short, requires = "a")]
        v: Option<String>,
        /// Comma-separated places, e.g. "2,inf".
        #[arg(long, conflicts_with_all = ["a", "b", "v"])]
        class: Option<String>,
    },
    /// Local symbols and corestriction Brauer class of (alpha, beta) over a real quadratic field.
    CorClass {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Clifford algebra of a diagonal form.
    Clifford {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        form: String,
        /// Identify the even part as a quaternion algebra (rank 3, or rank 4 over Q).
        #[arg(long)]
        even: bool,
        /// Include the sparse multiplication table.
        #[arg(long)]
        table: bool,
    },
    /// Weight-multiplicity computations for SL2^d.
    Rep {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = RepOp::Ks)]
        op: RepOp,
        /// Highest weight of the input irreducible, e.g. "2,0"; defaults to (1,...,1).
        #[arg(long)]
        highest: Option<String>,
        /// Cohomological weight for Hodge numbers, read off the last factor.
        #[arg(long)]
        hodge: Option<u32>,
    },
    /// Dictionary between K3 forms and Kuga-Satake fourfolds.
    Dict {
        #[command(subcommand)]
        direction: DictDirection,
    },
    /// Run a built-in identity suite.
    Selftest {
        #[arg(long, value_enum, default_value_t = selftest::Suite::PaperIdentities)]
        suite: selftest::Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum DictDirection {
    /// K3-type ternary form over a real quadratic field to quaternion and Kuga-Satake data.
    K3ToAv {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        form: String,
    },
    /// Rational quaternary form to the conic pair over its discriminant field.
    AvToK3 {
        #[arg(long)]
        form: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RepOp {
    Decompose,
    Sym2,
    Wedge2,
    Ks,
}

fn rational_arg(s: &str) -> CliResult<k3rm_core::Rational> {
    Ok(parse_rational(s)?)
}

fn field_opt(arg: &Option<String>) -> CliResult<(Option<NumberField>, Value)> {
    match arg {
        Some(a) => {
            let (f, v) = load_field(a)?;
            Ok((Some(f), v))
        }
        None => Ok((None, Value::Null)),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

/// Runs a subcommand, returning the echoed input and the result.
fn run(command: &Command) -> CliResult<(&'static str, Value, Value)> {
    match command {
        Command::Field { minpoly, catalog } => {
            if *catalog {
                let fields: Vec<Value> = NumberField::catalog().iter().map(|f| to_value(&f.summary())).collect();
                return Ok(("field", json!({ "catalog": true }), json!({ "fields": fields })));
            }
            let arg = minpoly.as_deref().expect("clap enforces --minpoly");
            let (f, echo) = load_field(arg)?;
            Ok(("field", json!({ "minpoly": echo }), to_value(&f.summary())))
        }
        Command::Form { field, form } => {
            let (f, fecho) = field_opt(field)?;
            let (q, qecho) = load_form(form, f.as_ref())?;
            let sig = q.signatures()?;
            let diag = q.diagonalize()?;
            let result = json!({
                "rank": q.rank(),
                "disc": q.disc_form().to_strings(),
                "signatures": sig.pairs,
                "signature_multiset": sig.multiset(),
                "k3_type": sig.is_k3_type(),
                "positive_embedding": sig.positive_embedding(),
                "diagonal": diag.entries.iter().map(|e| e.to_strings()).collect::<Vec<_>>(),
                "basis": diag.basis.iter().map(|r| r.iter().map(|e| e.to_strings()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Ok(("form", json!({ "field": fecho, "form": qecho }), result))
        }
        Command::Corestrict { field, form, double } => {
            let (f, fecho) = field_opt(field)?;
            let (mut q, qecho) = load_form(form, f.as_ref())?;
            if *double {
                let two = q.field().from_rational(k3rm_core::rational::rat(2));
                q = q.scale(&two)?.form;
            }
            let report = LatticeReport::build(q.field(), &q)?;
            let (elementary_divisors, disc_form_values) = match &report.discriminant {
                Some(d) => (to_value(&d.elementary_divisors), to_value(&d.q_values)),
                None => (Value::Null, Value::Null),
            };
            let result = json!({
                "gram": report.gram,
                "det": report.det,
                "elementary_divisors": elementary_divisors,
                "disc_form_values": disc_form_values,
                "even": report.even,
                "signature": report.signature,
                "embeddability": report.embeddability,
                "lemma_check": report.lemma_check,
                "discriminant": report.discriminant,
            });
            Ok(("corestrict", json!({ "field": fecho, "form": qecho, "double": double }), result))
        }
        Command::Lattice { gram } => {
            let value = load_json(gram)?;
            let rows: Vec<Vec<RationalRepr>> = serde_json::from_value(value.clone())
                .map_err(|e| CliError::Usage(format!("gram must be an array of rows: {e}")))?;
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|c| c.to_rational()).collect::<k3rm_core::Result<Vec<_>>>())
                .collect::<k3rm_core::Result<Vec<_>>>()?;
            let g = GramMatrix::from_matrix(QMatrix::from_rows(rows)?)?;
            let even = is_even(&g);
            let disc = if g.matrix.is_integral() {
                Some(DiscriminantSummary::from(&discriminant_group(&g)?))
            } else {
                None
            };
            let result = json!({
                "rank": g.rank(),
                "det": format_rational(&g.det()),
                "signature": g.matrix.signature()?,
                "even": even,
                "discriminant": disc,
                "embeddability": if even { Some(k3_embeddability(&g)?) } else { None },
            });
            Ok(("lattice", json!({ "gram": value }), result))
        }
        Command::Hilbert { class: Some(c), .. } => {
            let places = c
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<PlaceQ>())
                .collect::<k3rm_core::Result<Vec<_>>>()?;
            let class = BrauerClass::new(places)?;
            let bound = search_bound();
            let (x, y) = quaternion_from_class(&class, bound)?;
            let result = json!({ "class": class, "representative": [x, y], "search_bound": bound });
            Ok(("hilbert", json!({ "class": c }), result))
        }
        Command::Hilbert { a, b, v, .. } => {
            let a = a.as_deref().expect("clap requires -a");
            let b = b.as_deref().expect("clap requires -b");
            let (x, y) = (rational_arg(a)?, rational_arg(b)?);
            let input = json!({ "a": format_rational(&x), "b": format_rational(&y), "v": v });
            let result = match v {
                Some(place) => {
                    let place: PlaceQ = place.parse()?;
                    json!({ "place": place, "symbol": hilbert_q(&x, &y, &place)? })
                }
                None => json!({ "ramification": ramification_q(&x, &y)? }),
            };
            Ok(("hilbert", input, result))
        }
        Command::CorClass { field, alpha, beta } => {
            let (f, fecho) = load_field(field)?;
            let b = QuaternionAlgebra::new(f.clone(), parse_element(&f, alpha)?, parse_element(&f, beta)?)?;
            let class = corestriction_class(&b)?;
            let symbols = local_symbols(&b)?;
            let representative = if class.is_trivial() {
                Value::String("split_M2".into())
            } else {
                match quaternion_from_class(&class, search_bound()) {
                    Ok(pair) => to_value(&pair),
                    Err(Error::SearchExhausted { bound }) => json!({ "search_exhausted": bound }),
                    Err(e) => return Err(e.into()),
                }
            };
            let result = json!({
                "alpha": b.alpha.to_strings(),
                "beta": b.beta.to_strings(),
                "local_symbols": symbols,
                "real_ramification": real_ramification_count(&b)?,
                "ram_infinity_condition": ram_infinity_condition(&b)?,
                "cor_class": class,
                "representative": representative,
            });
            Ok(("cor-class", json!({ "field": fecho, "alpha": alpha, "beta": beta }), result))
        }
        Command::Clifford { field, form, even, table } => {
            let (f, fecho) = field_opt(field)?;
            let (q, qecho) = load_form(form, f.as_ref())?;
            if !q.is_diagonal() {
                return Err(Error::InvalidInput("clifford expects a diagonal form".into()).into());
            }
            let cl = CliffordAlgebra::from_form(&q)?;
            let mut result = json!({
                "rank": cl.rank(),
                "dimension": cl.dimension(),
                "even_dimension": cl.even_dimension(),
                "associative": cl.check_associativity(64, DEFAULT_SEED),
                "even_part_closed": cl.even_part_closed(),
            });
            if *even {
                result["even_part"] = even_part(&q)?;
            }
            if *table {
                result["table"] = to_value(&cl.sparse_table());
            }
            let input = json!({ "field": fecho, "form": qecho, "even": even, "table": table });
            Ok(("clifford", input, result))
        }
        Command::Rep { d, op, highest, hodge } => rep(*d, *op, highest.as_deref(), *hodge),
        Command::Dict { direction } => match direction {
            DictDirection::K3ToAv { field, form } => {
                let (f, fecho) = field_opt(field)?;
                let (q, qecho) = load_form(form, f.as_ref())?;
                let report = k3_to_fourfold(q.field(), &q, search_bound())?;
                Ok(("dict k3-to-av", json!({ "field": fecho, "form": qecho }), to_value(&report)))
            }
            DictDirection::AvToK3 { form } => {
                let (q, qecho) = load_form(form, Some(&NumberField::rationals()))?;
                let report = fourfold_to_k3(&q, search_bound())?;
                Ok(("dict av-to-k3", json!({ "form": qecho }), to_value(&report)))
            }
        },
        Command::Selftest { suite, seed } => {
            let report = selftest::run(*suite, *seed);
            let input = json!({ "suite": suite.name(), "seed": seed });
            if report.failed > 0 {
                return Err(CliError::Domain(Error::Internal(format!(
                    "{} of {} self-test checks failed: {}",
                    report.failed,
                    report.checks.len(),
                    report.failed_names().join(", ")
                ))));
            }
            Ok(("selftest", input, to_value(&report)))
        }
    }
}

fn even_part(q: &k3rm_core::kquad::KQuadraticForm) -> CliResult<Value> {
    match q.rank() {
        3 => {
            let b = even_clifford_ternary(q)?;
            let ramification = match b.rational_pair() {
                Some((x, y)) => to_value(&ramification_q(&x, &y)?),
                None => Value::Null,
            };
            let cor_class = if b.degree() == 2 { Some(corestriction_class(&b)?) } else { None };
            Ok(json!({
                "alpha": b.alpha.to_strings(),
                "beta": b.beta.to_strings(),
                "ramification": ramification,
                "cor_class": cor_class,
            }))
        }
        4 if q.field().is_rationals() => {
            let d: Vec<_> = (0..4).map(|i| q.entry(i, i).coords()[0].clone()).collect();
            let c = even_clifford_quaternary(&d)?;
            Ok(json!({
                "center_radicand": c.radicand.to_string(),
                "minpoly": c.algebra.field.minpoly().to_string(),
                "alpha": c.algebra.alpha.to_strings(),
                "beta": c.algebra.beta.to_strings(),
                "cor_class": corestriction_class(&c.algebra)?,
            }))
        }
        r => Err(Error::DimensionMismatch(format!(
            "even part is identified for rank 3, or rank 4 over Q; got rank {r}"
        ))
        .into()),
    }
}

fn rep(d: usize, op: RepOp, highest: Option<&str>, hodge: Option<u32>) -> CliResult<(&'static str, Value, Value)> {
    let input = json!({ "d": d, "op": format!("{op:?}").to_lowercase(), "highest": highest, "hodge": hodge });
    if !(1..=6).contains(&d) {
        return Err(CliError::Usage(format!("--d must be in 1..=6, got {d}")));
    }
    if let RepOp::Ks = op {
        return Ok(("rep", input, to_value(&ks_representation_report(d)?)));
    }
    let chi = match highest {
        Some(h) => {
            let k = h
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("bad highest weight {h:?}: {e}")))?;
            if k.len() != d {
                return Err(CliError::Usage(format!("highest weight needs {d} entries")));
            }
            irr_char(&k)
        }
        None => standard(d),
    };
    let out = match op {
        RepOp::Decompose => chi,
        RepOp::Sym2 => chi.sym2()?,
        RepOp::Wedge2 => chi.wedge2()?,
        RepOp::Ks => unreachable!(),
    };
    let dec = decompose(&out)?;
    let mut result = json!({ "dim": out.dim(), "decomposition": dec.labelled() });
    if let Some(m) = hodge {
        result["hodge"] = to_value(&hodge_by_summand(&dec, m)?);
    }
    Ok(("rep", input, result))
}

fn emit(v: &Value, compact: bool) {
    let text = if compact {
        serde_json::to_string(v)
    } else {
        serde_json::to_string_pretty(v)
    };
    let mut out = std::io::stdout().lock();
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(out, "{}", text.expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let usage = e.render().to_string();
            emit(&json!({ "error": "UsageError", "message": usage }), true);
            return ExitCode::from(1);
        }
    };
    match run(&cli.command) {
        Ok((command, input, result)) => {
            let envelope = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "input": input,
                "result": result,
            });
            emit(&envelope, cli.json);
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(message)) => {
            emit(&json!({ "error": "UsageError", "message": message }), cli.json);
            ExitCode::from(1)
        }
        Err(CliError::Domain(e)) => {
            emit(&json!({ "error": e.code(), "message": e.to_string() }), cli.json);
            ExitCode::from(2)
        }
    }
}
