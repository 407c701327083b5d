//! Command-line front end for `polyrank`.
//!
//! Reports go to standard output (or `--out`) as one JSON record per line;
//! human-readable summaries go to standard error. Exit status is 0 on
//! success, 1 when a check or verification fails, 2 on bad input and 3 when
//! a size limit is hit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use polyrank::cone::{cone_member, enumerate_generators, Certificate, GeneratorSet};
use polyrank::constructs::{
    dfz_x2, direct_sum, epsilon_perturb, equalities_x1, equalities_x2, fano_x1, phi, phi_eps_with,
    x1_ground, x2_ground,
};
use polyrank::format::{
    fraction, read_arrangement, read_rankvec, write_arrangement, write_rankvec,
};
use polyrank::inequality::{check_polymatroid, dfz_ratio, ingleton_scan, CheckMode, ScanMode};
use polyrank::matroid::{circuits, is_connected, is_matroid, separator};
use polyrank::rational::{self, Rational};
use polyrank::{Arrangement, Error, Field, GroundSet, RankVector, SubsetMask};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "polyrank",
    version,
    about = "Exact polymatroid and subspace-arrangement tools"
)]
struct Cli {
    /// Worker threads for parallel scans (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Fano,
    X2,
    Phi,
    PhiEps,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum EqualitySet {
    X1,
    X2,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named arrangement ("arr v1") or rank vector ("rankvec v1").
    Construct {
        #[arg(value_enum)]
        which: Construction,
        /// Field for fano or x2, and for the X1 part of phi and phi-eps.
        #[arg(long)]
        field: Option<String>,
        /// Field for the X2 part of phi and phi-eps.
        #[arg(long)]
        field_x2: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
        /// Emit the rank vector of fano or x2 instead of the arrangement.
        #[arg(long)]
        rankvec: bool,
    },
    /// Rank vector of an arrangement.
    Rank {
        arr: PathBuf,
    },
    /// Check the polymatroid axioms.
    CheckPolymatroid {
        h: PathBuf,
        /// Check every subset pair instead of the elemental inequalities.
        #[arg(long)]
        full: bool,
    },
    CheckMatroid {
        h: PathBuf,
    },
    /// Circuits of a matroid, one hex mask per line.
    Circuits {
        h: PathBuf,
    },
    Connected {
        h: PathBuf,
    },
    /// Minimum of the Ingleton expression.
    Ingleton {
        h: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// ε-perturbation `min(h, h(full) − ε)`.
    Perturb {
        h: PathBuf,
        #[arg(long)]
        epsilon: String,
    },
    /// Arrangement realising the perturbation by an integer `k`.
    IntPerturb {
        arr: PathBuf,
        #[arg(long)]
        k: usize,
    },
    DirectSum {
        h1: PathBuf,
        h2: PathBuf,
    },
    /// Rank function on new elements standing for the given subsets.
    Induce {
        h: PathBuf,
        /// Comma-separated hex masks.
        #[arg(long, value_delimiter = ',', required = true)]
        subsets: Vec<String>,
    },
    /// Evaluate the X1 or X2 equality list.
    Equalities {
        h: PathBuf,
        #[arg(long = "set", value_enum)]
        set: EqualitySet,
    },
    /// `min h(N) / max h(D)`.
    DfzRatio {
        h: PathBuf,
        /// Comma-separated hex masks for the numerator sets.
        #[arg(long, value_delimiter = ',')]
        num: Vec<String>,
        /// Comma-separated hex masks for the denominator sets.
        #[arg(long, value_delimiter = ',')]
        den: Vec<String>,
        /// Use singletons Y over W (x1) or Z over V (x2).
        #[arg(long, value_enum)]
        preset: Option<EqualitySet>,
    },
    /// Enumerate representable rank vectors into a directory.
    EnumGens {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Membership in the cone of the generators in a directory.
    ConeMember {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        gens: PathBuf,
    },
    /// Check the computational facts behind the Φ^ε construction.
    VerifyPaper {
        #[arg(long, default_value = "GF(2)")]
        field_x1: String,
        #[arg(long, default_value = "GF(3)")]
        field_x2: String,
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// What a command produced: its report and whether its check passed.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn pass(text: String) -> Self {
        Output { text, ok: true }
    }

    fn verdict(text: String, ok: bool) -> Self {
        Output { text, ok }
    }
}

fn line(v: Value) -> String {
    format!("{v}\n")
}

fn hex(a: SubsetMask) -> String {
    format!("{a:x}")
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_rankvec(path: &Path) -> Result<RankVector, Error> {
    read_rankvec(&read_text(path)?)
}

fn load_arrangement(path: &Path) -> Result<Arrangement, Error> {
    read_arrangement(&read_text(path)?)
}

fn parse_mask(s: &str) -> Result<SubsetMask, Error> {
    let digits = s.trim().trim_start_matches("0x");
    u32::from_str_radix(digits, 16)
        .map(SubsetMask)
        .map_err(|_| Error::Input(format!("bad mask {s:?}")))
}

fn parse_masks(list: &[String]) -> Result<Vec<SubsetMask>, Error> {
    list.iter().map(|s| parse_mask(s)).collect()
}

fn field_or(spec: Option<&str>, default: u32) -> Result<Field, Error> {
    match spec {
        Some(s) => Field::parse(s),
        None => Field::prime(default),
    }
}

fn singletons(g: &GroundSet, labels: &[&str]) -> Vec<SubsetMask> {
    labels.iter().map(|l| g.mask_of(&[l])).collect()
}

fn construct(
    which: Construction,
    field: Option<&str>,
    field_x2: Option<&str>,
    epsilon: Option<&str>,
    rankvec: bool,
) -> Result<Output, Error> {
    let arr_or_rank = |arr: Arrangement| {
        if rankvec {
            write_rankvec(&arr.rank_vector())
        } else {
            write_arrangement(&arr)
        }
    };
    let text = match which {
        Construction::Fano => arr_or_rank(fano_x1(&field_or(field, 2)?)),
        Construction::X2 => arr_or_rank(dfz_x2(&field_or(field.or(field_x2), 3)?)),
        Construction::Phi => write_rankvec(&phi(&field_or(field, 2)?, &field_or(field_x2, 3)?)?),
        Construction::PhiEps => {
            let eps = rational::parse(epsilon.unwrap_or("1"))?;
            write_rankvec(&phi_eps_with(
                &eps,
                &field_or(field, 2)?,
                &field_or(field_x2, 3)?,
            )?)
        }
    };
    Ok(Output::pass(text))
}

fn enum_gens(n: usize, field: &str, dim: usize, dir: &Path) -> Result<Output, Error> {
    let field = Field::parse(field)?;
    let gens = enumerate_generators(n, &field, dim)?;
    fs::create_dir_all(dir)?;
    for (i, g) in gens.iter().enumerate() {
        fs::write(dir.join(format!("g{i:05}.rankvec")), write_rankvec(&g.rank))?;
        if let Some(src) = &g.source {
            fs::write(dir.join(format!("g{i:05}.arr")), write_arrangement(src))?;
        }
    }
    eprintln!(
        "{} generators from {} subspace tuples written to {}",
        gens.len(),
        gens.tuples(),
        dir.display()
    );
    Ok(Output::pass(line(json!({
        "generators": gens.len(),
        "tuples": gens.tuples(),
        "field": field.to_string(),
        "dim": dim,
    }))))
}

fn load_generators(dir: &Path, n: usize) -> Result<GeneratorSet, Error> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "rankvec"));
    paths.sort();
    let vectors = paths
        .iter()
        .map(|p| load_rankvec(p))
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorSet::from_vectors(n, vectors)
}

fn fractions(values: &[Rational]) -> Vec<String> {
    values.iter().map(fraction).collect()
}

fn cone(h: &Path, gens: &Path) -> Result<Output, Error> {
    let h = load_rankvec(h)?;
    let gens = load_generators(gens, h.n())?;
    let cert = cone_member(&h, &gens)?;
    let report = match &cert {
        Certificate::Member { coefficients } => json!({
            "verdict": "member",
            "generators": gens.len(),
            "coefficients": fractions(coefficients),
        }),
        Certificate::NonMember { functional } => {
            eprintln!(
                "not in the cone of these {} generators; this does not rule out the closed \
                 cone of all representable rank functions unless the set is complete",
                gens.len()
            );
            json!({
                "verdict": "non-member",
                "generators": gens.len(),
                "functional": fractions(functional),
            })
        }
    };
    Ok(Output::pass(line(report)))
}

fn verify_paper(
    field_x1: &str,
    field_x2: &str,
    epsilon: &str,
    trials: u64,
    seed: u64,
) -> Result<Output, Error> {
    let opts = polyrank::verify::VerifyOptions {
        field_x1: Field::parse(field_x1)?,
        field_x2: Field::parse(field_x2)?,
        epsilon: rational::parse(epsilon)?,
        trials,
        seed,
    };
    let report = polyrank::verify::verify_paper(&opts)?;
    let mut text = String::new();
    for item in &report.items {
        text.push_str(&line(json!({
            "item": item.name,
            "passed": item.passed,
            "expected_failure": item.expected_failure,
            "note": item.note,
        })));
        eprintln!(
            "{} {}: {}",
            if item.passed { "pass" } else { "FAIL" },
            item.name,
            item.note
        );
    }
    Ok(Output::verdict(text, report.all_passed()))
}

fn run(command: Command) -> Result<Output, Error> {
    match command {
        Command::Construct {
            which,
            field,
            field_x2,
            epsilon,
            rankvec,
        } => construct(
            which,
            field.as_deref(),
            field_x2.as_deref(),
            epsilon.as_deref(),
            rankvec,
        ),
        Command::Rank { arr } => Ok(Output::pass(write_rankvec(
            &load_arrangement(&arr)?.rank_vector(),
        ))),
        Command::CheckPolymatroid { h, full } => {
            let h = load_rankvec(&h)?;
            let mode = if full {
                CheckMode::Full
            } else {
                CheckMode::Elemental
            };
            Ok(match check_polymatroid(&h, mode)? {
                None => Output::verdict(line(json!({ "polymatroid": true })), true),
                Some(v) => {
                    eprintln!(
                        "axiom {} fails by {}",
                        v.axiom,
                        rational::display(&v.amount)
                    );
                    Output::verdict(
                        line(json!({
                            "polymatroid": false,
                            "axiom": v.axiom.to_string(),
                            "sets": v.sets.iter().map(|&a| hex(a)).collect::<Vec<_>>(),
                            "amount": fraction(&v.amount),
                        })),
                        false,
                    )
                }
            })
        }
        Command::CheckMatroid { h } => {
            let ok = is_matroid(&load_rankvec(&h)?)?;
            Ok(Output::verdict(line(json!({ "matroid": ok })), ok))
        }
        Command::Circuits { h } => {
            let text: String = circuits(&load_rankvec(&h)?)?
                .into_iter()
                .map(|c| format!("{c:x}\n"))
                .collect();
            Ok(Output::pass(text))
        }
        Command::Connected { h } => {
            let h = load_rankvec(&h)?;
            let ok = is_connected(&h)?;
            let sep = separator(&h).map(hex);
            Ok(Output::verdict(
                line(json!({ "connected": ok, "separator": sep })),
                ok,
            ))
        }
        Command::Ingleton {
            h,
            mode,
            trials,
            seed,
        } => {
            let h = load_rankvec(&h)?;
            let mode = match mode {
                Mode::Exhaustive => ScanMode::Exhaustive,
                Mode::Sampled => ScanMode::Sampled { trials, seed },
            };
            let r = ingleton_scan(&h, mode)?;
            let ok = !r.min_score.is_negative();
            eprintln!(
                "min J = {} over {} quadruples",
                rational::display(&r.min_score),
                r.quadruples_checked
            );
            Ok(Output::verdict(
                line(json!({
                    "min_score": fraction(&r.min_score),
                    "argmin": r.argmin.iter().map(|&a| hex(a)).collect::<Vec<_>>(),
                    "checked": r.quadruples_checked,
                    "mode": r.mode.to_string(),
                })),
                ok,
            ))
        }
        Command::Perturb { h, epsilon } => {
            let h = load_rankvec(&h)?;
            let eps = rational::parse(&epsilon)?;
            Ok(Output::pass(write_rankvec(&epsilon_perturb(&h, &eps)?)))
        }
        Command::IntPerturb { arr, k } => Ok(Output::pass(write_arrangement(
            &load_arrangement(&arr)?.integer_perturb(k)?,
        ))),
        Command::DirectSum { h1, h2 } => Ok(Output::pass(write_rankvec(&direct_sum(
            &load_rankvec(&h1)?,
            &load_rankvec(&h2)?,
        )?))),
        Command::Induce { h, subsets } => {
            let h = load_rankvec(&h)?;
            Ok(Output::pass(write_rankvec(
                &h.induce(&parse_masks(&subsets)?)?,
            )))
        }
        Command::Equalities { h, set } => {
            let (list, ground) = match set {
                EqualitySet::X1 => (equalities_x1(), x1_ground()),
                EqualitySet::X2 => (equalities_x2(), x2_ground()),
            };
            let h = load_rankvec(&h)?;
            if h.n() != ground.len() {
                return Err(Error::Input(format!(
                    "equality list needs {} elements, rank vector has {}",
                    ground.len(),
                    h.n()
                )));
            }
            let mut text = String::new();
            let mut failed = 0;
            for e in &list {
                let residual = e.residual(&h)?;
                let holds = e.holds(&h)?;
                failed += usize::from(!holds);
                text.push_str(&line(json!({
                    "equality": e.describe(&ground),
                    "holds": holds,
                    "residual": fraction(&residual),
                })));
            }
            eprintln!("{} of {} equalities hold", list.len() - failed, list.len());
            Ok(Output::verdict(text, failed == 0))
        }
        Command::DfzRatio {
            h,
            num,
            den,
            preset,
        } => {
            let h = load_rankvec(&h)?;
            let (nums, dens) = match preset {
                Some(EqualitySet::X1) => {
                    let g = x1_ground();
                    (
                        singletons(&g, &["Y1", "Y2", "Y3"]),
                        singletons(&g, &["W1", "W2", "W3", "W4"]),
                    )
                }
                Some(EqualitySet::X2) => {
                    let g = x2_ground();
                    (
                        singletons(&g, &["Z1", "Z2", "Z3", "Z4", "Z5"]),
                        singletons(&g, &["V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8"]),
                    )
                }
                None => (parse_masks(&num)?, parse_masks(&den)?),
            };
            let r = dfz_ratio(&h, &nums, &dens)?;
            Ok(Output::pass(line(json!({ "ratio": fraction(&r) }))))
        }
        Command::EnumGens {
            n,
            field,
            dim,
            out_dir,
        } => enum_gens(n, &field, dim, &out_dir),
        Command::ConeMember { h, gens } => cone(&h, &gens),
        Command::VerifyPaper {
            field_x1,
            field_x2,
            epsilon,
            trials,
            seed,
        } => verify_paper(&field_x1, &field_x2, &epsilon, trials, seed),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Size(_) => 3,
        Error::Verification(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(output) => {
            if let Err(e) = emit(cli.out.as_deref(), &output.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if output.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
