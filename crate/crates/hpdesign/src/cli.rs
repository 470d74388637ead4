//! Command-line front end: file-driven access to every analysis, with
//! deterministic text output (sequences as H/P strings, numbers as exact
//! decimals when the denominator is a power of ten, else p/q).

use clap::{Parser, Subcommand};
use num_traits::{One, Signed};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::landscape::{
    diameter, intersect_dags, is_connected_under, min_mutation_system, nearest_optimal,
    weighted_distance, MutationSystem,
};
use crate::mincut::one_optimum;
use crate::model::{
    build_phi_from_geometry, content_lines, default_alpha, default_beta, format_rational,
    hp_encode, parse_err, parse_fitness_file, parse_geometry_file, parse_index, parse_rational,
    parse_weights_file, write_fitness_file, FitnessFunction, Geometry, HpSequence, Rational,
};
use crate::oracle::{brute_f, count_ideals, OracleCap};
use crate::paramsweep::{energy_distance_landscape, suboptimal_stream, tune_beta, BetaFamily};
use crate::pqdag::{count_bound, enumerate_optima, pq_dag, PqDag};

#[derive(Parser)]
#[command(
    name = "hpdesign",
    version,
    about = "Exact optimization and landscape analysis for H/P sequence design"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a fitness file from a backbone geometry file.
    BuildPhi {
        geometry: PathBuf,
        /// Contact scale, nonpositive rational (default -2).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Exposure scale, nonnegative rational (default 1/3).
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Write the fitness file here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print one optimal sequence and its energy.
    Optimize { fitness: PathBuf },
    /// Print the supernode table and DOT rendering of the optimum dag.
    Dag {
        fitness: PathBuf,
        /// Write the DOT rendering here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List all optimal sequences.
    Enumerate {
        fitness: PathBuf,
        /// Stop after this many sequences.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Bound the number of optima, or count exactly with --brute.
    Count {
        fitness: PathBuf,
        /// Exhaustive ideal count (exponential; capped).
        #[arg(long)]
        brute: bool,
        /// Raise the brute-force cap (hard ceiling 24).
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Weighted Hamming diameter of the optimum set.
    Diameter {
        fitness: PathBuf,
        /// Weight file (omitted residues weigh 0); default all 1.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// The optimum nearest the target (or farthest, via negative weights).
    Nearest {
        fitness: PathBuf,
        /// Target sequence, H/P letters (or amino-acid letters with --amino).
        #[arg(long)]
        target: String,
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Read the target as amino-acid letters.
        #[arg(long)]
        amino: bool,
    },
    /// Dag of sequences optimal for every given fitness file at once.
    Intersect {
        #[arg(required = true)]
        fitness: Vec<PathBuf>,
    },
    /// Minimal mutation sets connecting the optimum set (or one pair).
    Connect {
        fitness: PathBuf,
        /// Two optimal sequences to connect instead of the whole set.
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        pair: Option<Vec<String>>,
        /// Check whether the mutation system in this file suffices.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Stream sequences in nondecreasing energy order.
    Suboptimal {
        fitness: PathBuf,
        /// Emit at most this many sequences.
        #[arg(long)]
        limit: Option<u64>,
        /// Emit every sequence within this energy of the minimum.
        #[arg(long, allow_hyphen_values = true)]
        slack: Option<String>,
    },
    /// Energy-distance envelope: corners, breakpoints, and lower bounds.
    Landscape {
        fitness: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        amino: bool,
        /// Add exact per-distance minima (exponential; capped).
        #[arg(long)]
        brute: bool,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Scan beta >= 0 for the optimum sets nearest a target.
    Tune {
        geometry: PathBuf,
        /// Target sequence; defaults to the geometry's native letters.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        amino: bool,
    },
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Cmd::BuildPhi {
            geometry,
            alpha,
            beta,
            output,
        } => {
            let geom = load_geometry(&geometry)?;
            let alpha = param_or(alpha, default_alpha)?;
            let beta = param_or(beta, default_beta)?;
            let phi = build_phi_from_geometry(&geom, &alpha, &beta)?;
            let text = write_fitness_file(&phi);
            match output {
                Some(path) => write_file(&path, &text),
                None => put(out, &text),
            }
        }
        Cmd::Optimize { fitness } => {
            let phi = load_phi(&fitness)?;
            let (x, value) = one_optimum(&phi);
            put(out, &format!("{}\nenergy\t{}\n", x, format_rational(&value)))
        }
        Cmd::Dag { fitness, output } => {
            let dag = pq_dag(&load_phi(&fitness)?);
            put_dag_table(out, &dag)?;
            match output {
                Some(path) => write_file(&path, &dag.to_dot()),
                None => put(out, &format!("\n{}", dag.to_dot())),
            }
        }
        Cmd::Enumerate { fitness, limit } => {
            let limit = positive_limit(limit)?;
            let dag = pq_dag(&load_phi(&fitness)?);
            for (count, x) in enumerate_optima(&dag).enumerate() {
                if limit.is_some_and(|l| count as u64 >= l) {
                    break;
                }
                put(out, &format!("{}\n", x))?;
            }
            Ok(())
        }
        Cmd::Count {
            fitness,
            brute,
            max_n,
        } => {
            let dag = pq_dag(&load_phi(&fitness)?);
            if brute {
                let exact = count_ideals(&dag, oracle_cap(max_n)?)?;
                put(out, &format!("count\t{}\n", exact))
            } else {
                let (lower, upper) = count_bound(&dag);
                put(out, &format!("lower\t{}\nupper\t{}\n", lower, upper))
            }
        }
        Cmd::Diameter { fitness, weights } => {
            let phi = load_phi(&fitness)?;
            let w = load_weights(weights.as_deref(), phi.n())?;
            let d = diameter(&pq_dag(&phi), &w)?;
            put(out, &format!("diameter\t{}\n", format_rational(&d)))
        }
        Cmd::Nearest {
            fitness,
            target,
            weights,
            amino,
        } => {
            let phi = load_phi(&fitness)?;
            let t = parse_target(&target, amino, phi.n())?;
            let w = load_weights(weights.as_deref(), phi.n())?;
            let x = nearest_optimal(&phi, &t, &w)?;
            let d = weighted_distance(&x, &t, &w)?;
            let value = phi.evaluate(&x)?;
            put(
                out,
                &format!(
                    "{}\ndistance\t{}\nenergy\t{}\n",
                    x,
                    format_rational(&d),
                    format_rational(&value)
                ),
            )
        }
        Cmd::Intersect { fitness } => {
            let dags: Vec<PqDag> = fitness
                .iter()
                .map(|path| Ok(pq_dag(&load_phi(path)?)))
                .collect::<Result<_>>()?;
            let refs: Vec<&PqDag> = dags.iter().collect();
            match intersect_dags(&refs)? {
                None => put(out, "EMPTY\n"),
                Some(dag) => {
                    put_dag_table(out, &dag)?;
                    put(out, &format!("\n{}", dag.to_dot()))
                }
            }
        }
        Cmd::Connect {
            fitness,
            pair,
            check,
        } => {
            let phi = load_phi(&fitness)?;
            let dag = pq_dag(&phi);
            let pair = match &pair {
                None => None,
                Some(two) => Some((
                    parse_target(&two[0], false, phi.n())?,
                    parse_target(&two[1], false, phi.n())?,
                )),
            };
            let pair_refs = pair.as_ref().map(|(a, b)| (a, b));
            let system = min_mutation_system(&dag, pair_refs)?;
            for set in system.sets() {
                let indices: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
                put(out, &format!("set\t{}\n", indices.join("\t")))?;
            }
            if let Some(path) = check {
                let text = read_file(&path)?;
                let given = parse_system_file(&text, &path.display().to_string(), phi.n())?;
                let ok = is_connected_under(&dag, &given, pair_refs)?;
                put(out, &format!("connected\t{}\n", ok))?;
            }
            Ok(())
        }
        Cmd::Suboptimal {
            fitness,
            limit,
            slack,
        } => {
            let phi = load_phi(&fitness)?;
            let limit = positive_limit(limit)?;
            let slack = match slack {
                None => None,
                Some(text) => {
                    let s = parse_rational(&text)?;
                    if s.is_negative() {
                        return Err(Error::Parameter(format!(
                            "slack {} must be nonnegative",
                            format_rational(&s)
                        )));
                    }
                    Some(s)
                }
            };
            if limit.is_none() && slack.is_none() {
                return Err(Error::Parameter(
                    "pass --limit <k> and/or --slack <e>".to_string(),
                ));
            }
            let mut ceiling: Option<Rational> = None;
            for (count, (x, value)) in suboptimal_stream(&phi).enumerate() {
                if limit.is_some_and(|l| count as u64 >= l) {
                    break;
                }
                if let Some(s) = &slack {
                    let cap = ceiling.get_or_insert_with(|| &value + s);
                    if value > *cap {
                        break;
                    }
                }
                put(out, &format!("{}\t{}\n", x, format_rational(&value)))?;
            }
            Ok(())
        }
        Cmd::Landscape {
            fitness,
            target,
            amino,
            brute,
            max_n,
        } => {
            let phi = load_phi(&fitness)?;
            let t = parse_target(&target, amino, phi.n())?;
            let (envelope, plot) = energy_distance_landscape(&phi, &t)?;
            put(
                out,
                "# corner theta value left right; breakpoint d F; bound d lower; exact d F\n",
            )?;
            let pieces = envelope.pieces();
            for (k, (theta, value)) in envelope.corners().iter().enumerate() {
                put(
                    out,
                    &format!(
                        "corner\t{}\t{}\t{}\t{}\n",
                        format_rational(theta),
                        format_rational(value),
                        format_rational(&pieces[k].slope),
                        format_rational(&pieces[k + 1].slope)
                    ),
                )?;
            }
            for (d, f) in plot.breakpoints() {
                put(out, &format!("breakpoint\t{}\t{}\n", d, format_rational(f)))?;
            }
            for d in (0..=phi.n()).rev() {
                if plot.exact_f(d).is_none() {
                    let bound = plot.lower_bound(d)?;
                    put(out, &format!("bound\t{}\t{}\n", d, format_rational(&bound)))?;
                }
            }
            if brute {
                let cap = oracle_cap(max_n)?;
                for d in (0..=phi.n()).rev() {
                    let f = brute_f(&phi, &t, d, cap)?;
                    put(out, &format!("exact\t{}\t{}\n", d, format_rational(&f)))?;
                }
            }
            Ok(())
        }
        Cmd::Tune {
            geometry,
            target,
            weights,
            amino,
        } => {
            let geom = load_geometry(&geometry)?;
            let family = BetaFamily::from_geometry(&geom)?;
            let t = match target {
                Some(text) => parse_target(&text, amino, geom.n())?,
                None => geom.native_sequence().ok_or_else(|| {
                    Error::Parameter(
                        "geometry has no native letters; pass --target".to_string(),
                    )
                })??,
            };
            let w = load_weights(weights.as_deref(), geom.n())?;
            let result = tune_beta(&family, &t, &w)?;
            put(out, &format!("dmin\t{}\n", format_rational(&result.d_min)))?;
            for beta in &result.points {
                put(out, &format!("point\t{}\n", format_rational(beta)))?;
            }
            for (lo, hi) in &result.intervals {
                let hi = match hi {
                    Some(b) => format_rational(b),
                    None => "inf".to_string(),
                };
                put(out, &format!("interval\t{}\t{}\n", format_rational(lo), hi))?;
            }
            Ok(())
        }
    }
}

fn put(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: "<output>".to_string(),
        source,
    })
}

fn put_dag_table(out: &mut dyn Write, dag: &PqDag) -> Result<()> {
    let list = |members: &[usize]| {
        members
            .iter()
            .map(|&i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    put(out, &format!("n\t{}\n", dag.n()))?;
    put(out, &format!("interior\t{}\n", dag.interior_count()))?;
    put(out, &format!("s'\t{{{}}}\n", list(dag.s_members())))?;
    put(out, &format!("t'\t{{{}}}\n", list(dag.t_members())))?;
    for id in 0..dag.interior_count() {
        put(out, &format!("k{}\t{{{}}}\n", id, list(dag.members(id))))?;
    }
    for &(u, v) in dag.edges() {
        put(out, &format!("k{} -> k{}\n", u, v))?;
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_phi(path: &Path) -> Result<FitnessFunction> {
    parse_fitness_file(&read_file(path)?, &path.display().to_string())
}

fn load_geometry(path: &Path) -> Result<Geometry> {
    parse_geometry_file(&read_file(path)?, &path.display().to_string())
}

fn load_weights(path: Option<&Path>, n: usize) -> Result<Vec<Rational>> {
    match path {
        Some(p) => parse_weights_file(&read_file(p)?, &p.display().to_string(), n),
        None => Ok(vec![Rational::one(); n]),
    }
}

fn parse_target(text: &str, amino: bool, n: usize) -> Result<HpSequence> {
    let x = if amino { hp_encode(text)? } else { text.parse()? };
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    Ok(x)
}

fn param_or(text: Option<String>, default: fn() -> Rational) -> Result<Rational> {
    match text {
        Some(t) => parse_rational(&t),
        None => Ok(default()),
    }
}

fn positive_limit(limit: Option<u64>) -> Result<Option<u64>> {
    if limit == Some(0) {
        return Err(Error::Parameter("limit must be positive".to_string()));
    }
    Ok(limit)
}

fn oracle_cap(max_n: Option<usize>) -> Result<OracleCap> {
    match max_n {
        Some(m) => OracleCap::new(m),
        None => Ok(OracleCap::default()),
    }
}

/// Parses a mutation-system file: `set <i> <j> ...` rows, 1-based indices,
/// '#' comments.
fn parse_system_file(text: &str, file: &str, n: usize) -> Result<MutationSystem> {
    let mut sets = Vec::new();
    for (ln, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.split_first() {
            Some((&"set", indices)) if !indices.is_empty() => {
                let set: Vec<usize> = indices
                    .iter()
                    .map(|tok| parse_index(tok, n, file, ln))
                    .collect::<Result<_>>()?;
                sets.push(set);
            }
            _ => return Err(parse_err(file, ln, format!("expected 'set <i> ...', got '{}'", line))),
        }
    }
    Ok(MutationSystem::new(sets))
}
