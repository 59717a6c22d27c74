use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::json;

use qform::arith::{fmt_rat, parse_rat};
use qform::equiv::equivalent_over_z;
use qform::families::{verify_family_identity, FamilyTag};
use qform::pair::{canonical_pair, fmt_matrix, resolvent_of_alpha_closed_form, transition_matrices};
use qform::reps::{rep_equal_up_to, representations_up_to, representations_with_witnesses, Missing};
use qform::search::{search_region, SearchConfig};
use qform::tables::{find_set, load_dataset, table_dataset, verify_table_set};
use qform::{FormPair, IntForm, Rat};

#[derive(Parser)]
#[command(name = "qform", version, about = "Representation sets of positive-definite integral quadratic forms")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON-lines output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Values f(x) ≤ M for nonzero integer x, one per line.
    Reps {
        /// Coefficients s11 … sNN s12 s13 …, e.g. "1 1 1 0 0 0".
        form: String,
        #[arg(short = 'M', long = "max")]
        max: u64,
    },
    /// Search ternary forms for inequivalent classes with equal representation sets.
    Search {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "s33-max")]
        s33_max: u64,
        #[arg(long = "verify-bound", default_value_t = 3000)]
        verify_bound: u64,
        /// Length of Λ used to split candidate sets before confirmation.
        #[arg(long = "lambda-bound", default_value_t = 3000)]
        lambda_bound: u64,
    },
    /// Compare the representation sets of two forms up to a bound.
    VerifyPair {
        f: String,
        g: String,
        #[arg(long, short = 'M', alias = "max")]
        bound: u64,
    },
    /// Check table sets: equal representation sets, determinants and ratios.
    VerifyTable {
        /// Set number; all sets when omitted.
        #[arg(long)]
        set: Option<usize>,
        #[arg(long, short = 'M', alias = "max", default_value_t = 100_000)]
        bound: u64,
        /// Dataset file to use instead of the bundled one.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Find w ∈ GL_N(ℤ) with f(x·w) = g(x).
    Equiv { f: String, g: String },
    /// Canonical pair of a pair of ternary forms for α = h0 + h1 ξ1 + h2 ξ2 + h3 ξ3.
    Canonical {
        /// File with two lines: the coefficients of A and of B (rationals allowed).
        #[arg(long)]
        pair: PathBuf,
        /// h0,h1,h2,h3
        #[arg(long)]
        h: String,
    },
    /// Check a hexagonal or rhombohedral family member.
    Family {
        /// hex or rhomb.
        #[arg(long)]
        tag: FamilyTag,
        #[arg(short = 'c', long = "c", allow_hyphen_values = true)]
        c: String,
        #[arg(short = 'd', long = "d", allow_hyphen_values = true)]
        d: String,
        /// Also compare representation sets of the integral rescaling up to this bound.
        #[arg(long, short = 'M', alias = "max")]
        bound: Option<u64>,
    },
}

/// Successful runs report whether what they checked held.
enum Outcome {
    Ok,
    Failed,
}

fn parse_form(s: &str) -> anyhow::Result<IntForm> {
    let f: IntForm = s.parse().with_context(|| format!("malformed form {s:?}"))?;
    if !f.is_positive_definite() {
        bail!("{f} is not positive-definite");
    }
    Ok(f)
}

fn coeff_list(f: &IntForm) -> Vec<String> {
    f.coeffs().iter().map(ToString::to_string).collect()
}

fn json_form(f: &IntForm) -> serde_json::Value {
    let num = |c: String| c.parse::<i64>().map_or_else(|_| json!(c), |v| json!(v));
    serde_json::Value::Array(f.coeffs().iter().map(|c| num(c.to_string())).collect())
}

fn missing_label(m: Missing) -> &'static str {
    match m {
        Missing::First => "first",
        Missing::Second => "second",
    }
}

fn run(cli: Cli, out: &mut impl Write) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Reps { form, max } => {
            let f = parse_form(&form)?;
            if cli.json {
                let reps = representations_with_witnesses(&f, max)?;
                for v in reps.values() {
                    writeln!(out, "{}", json!({ "value": v, "witness": reps.witness(v) }))?;
                }
            } else {
                for v in representations_up_to(&f, max)?.values() {
                    writeln!(out, "{v}")?;
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Search { n, s33_max, verify_bound, lambda_bound } => {
            if n != 3 {
                bail!("the region search covers ternary forms only (--n 3)");
            }
            let config = SearchConfig { s33_max, verify_bound, lambda_bound, ..SearchConfig::default() };
            let report = search_region(&config)?;
            for set in &report.sets {
                if cli.json {
                    let forms: Vec<_> = set.forms.iter().map(json_form).collect();
                    writeln!(out, "{}", json!({ "forms": forms, "verified_to": set.verified_to, "complete": set.complete }))?;
                } else {
                    let forms: Vec<String> = set.forms.iter().map(|f| format!("({})", coeff_list(f).join(","))).collect();
                    writeln!(out, "{} verified_to={} complete={}", forms.join(" "), set.verified_to, set.complete)?;
                }
            }
            eprintln!(
                "{} forms, {} distinct Λ, {} sets, {} family sets dropped, {} sets leave the region, markers t2<t: {}, p_max≤q_t: {}",
                report.forms_scanned,
                report.lambda_runs,
                report.sets.len(),
                report.family_sets_dropped,
                report.beyond_region.len(),
                report.markers.guard_below_end,
                report.markers.interval_within_lambda
            );
            Ok(Outcome::Ok)
        }
        Command::VerifyPair { f, g, bound } => {
            let (f, g) = (parse_form(&f)?, parse_form(&g)?);
            let cmp = rep_equal_up_to(&f, &g, bound)?;
            match cmp.discrepancy {
                None => {
                    if cli.json {
                        writeln!(out, "{}", json!({ "equal": true, "bound": bound }))?;
                    } else {
                        writeln!(out, "EQUAL up to {bound}")?;
                    }
                    Ok(Outcome::Ok)
                }
                Some((v, m)) => {
                    if cli.json {
                        writeln!(out, "{}", json!({ "equal": false, "bound": bound, "value": v, "missing": missing_label(m) }))?;
                    } else {
                        writeln!(out, "DIFFER at {v}: {} form misses it", missing_label(m))?;
                    }
                    Ok(Outcome::Failed)
                }
            }
        }
        Command::VerifyTable { set, bound, data } => {
            let sets = match &data {
                Some(p) => load_dataset(p)?,
                None => table_dataset()?,
            };
            let chosen = match set {
                Some(n) => vec![find_set(&sets, n)?.clone()],
                None => sets,
            };
            let mut all = true;
            for s in &chosen {
                let r = verify_table_set(s, bound)?;
                all &= r.passed();
                let first_gap = r.pairs.iter().find_map(|p| p.comparison.discrepancy.map(|d| (p.second, d)));
                if cli.json {
                    let gap = first_gap.map(|(j, (v, m))| json!({ "member": j, "value": v, "missing": missing_label(m) }));
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "set": s.number,
                            "bound": bound,
                            "passed": r.passed(),
                            "determinants": r.determinants.iter().map(fmt_rat).collect::<Vec<_>>(),
                            "determinants_match": r.determinants_match,
                            "ratios_match": r.ratios_match,
                            "discrepancy": gap,
                        })
                    )?;
                } else {
                    let dets: Vec<String> = r.determinants.iter().map(fmt_rat).collect();
                    write!(out, "set {}: {} (dets {})", s.number, if r.passed() { "ok" } else { "FAILED" }, dets.join(" : "))?;
                    if let Some((j, (v, m))) = first_gap {
                        let who = if m == Missing::First { 0 } else { j };
                        write!(out, "; member {} misses {v}", who + 1)?;
                    }
                    if !r.determinants_match {
                        write!(out, "; printed determinants differ")?;
                    }
                    if !r.ratios_match {
                        write!(out, "; printed ratios differ")?;
                    }
                    writeln!(out)?;
                }
            }
            Ok(if all { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Equiv { f, g } => {
            let (f, g) = (parse_form(&f)?, parse_form(&g)?);
            match equivalent_over_z(&f, &g)? {
                Some(w) => {
                    if cli.json {
                        writeln!(out, "{}", json!({ "equivalent": true, "w": w.to_string() }))?;
                    } else {
                        writeln!(out, "{w}")?;
                    }
                    Ok(Outcome::Ok)
                }
                None => {
                    if cli.json {
                        writeln!(out, "{}", json!({ "equivalent": false }))?;
                    } else {
                        writeln!(out, "INEQUIVALENT")?;
                    }
                    Ok(Outcome::Failed)
                }
            }
        }
        Command::Canonical { pair, h } => {
            let text = std::fs::read_to_string(&pair).with_context(|| format!("cannot read {}", pair.display()))?;
            let p = FormPair::parse(&text)?;
            let hv: Vec<Rat> = h.split(',').map(parse_rat).collect::<qform::Result<_>>()?;
            let [h0, h1, h2, h3]: [Rat; 4] =
                hv.try_into().map_err(|_| anyhow::anyhow!("--h takes four comma-separated rationals"))?;
            let hh = [h1, h2, h3];
            let t = transition_matrices(&p, &h0, &hh)?;
            let canon = canonical_pair(&t.char_poly);
            let res = resolvent_of_alpha_closed_form(&p, &h0, &hh)?;
            let ch = t.char_poly.to_poly();
            let image = t.element().act(&p);
            let fields = [
                ("A~", fmt_matrix(canon.a.gram())),
                ("B~", fmt_matrix(canon.b.gram())),
                ("W", fmt_matrix(&t.w)),
                ("V", fmt_matrix(&t.v)),
                ("ch", ch.to_string()),
                ("ch_res", res.to_string()),
            ];
            if cli.json {
                let obj: serde_json::Map<String, serde_json::Value> =
                    fields.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                writeln!(out, "{}", serde_json::Value::Object(obj))?;
            } else {
                for (k, v) in &fields {
                    writeln!(out, "{k} = {v}")?;
                }
            }
            Ok(if image == canon { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Family { tag, c, d, bound } => {
            let (c, d) = (parse_rat(&c)?, parse_rat(&d)?);
            let r = verify_family_identity(tag, &c, &d, bound)?;
            let gap = r.numeric.as_ref().and_then(|n| n.discrepancy);
            if cli.json {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "tag": tag.to_string(),
                        "symbolic": r.symbolic,
                        "numeric_bound": r.numeric.as_ref().map(|n| n.bound),
                        "discrepancy": gap.map(|(v, m)| json!({ "value": v, "missing": missing_label(m) })),
                        "passed": r.passed(),
                    })
                )?;
            } else {
                write!(out, "{tag} c={} d={}: symbolic {}", fmt_rat(&c), fmt_rat(&d), if r.symbolic { "ok" } else { "FAILED" })?;
                if let Some(n) = &r.numeric {
                    match n.discrepancy {
                        None => write!(out, ", representation sets equal up to {}", n.bound)?,
                        Some((v, m)) => write!(out, ", {} form misses {v}", missing_label(m))?,
                    }
                }
                writeln!(out)?;
            }
            Ok(if r.passed() { Outcome::Ok } else { Outcome::Failed })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("qform: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(Outcome::Ok), Ok(())) => ExitCode::SUCCESS,
        (Ok(Outcome::Failed), Ok(())) => ExitCode::from(1),
        (Err(e), _) => {
            eprintln!("qform: {e:#}");
            ExitCode::from(2)
        }
        (_, Err(e)) => {
            eprintln!("qform: {e}");
            ExitCode::from(2)
        }
    }
}
