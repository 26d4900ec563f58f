//! Argument surface and command implementations.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use eqdec_core::eqrel::{
    witness::compose, witness::split_witness, ClassTable, SetPart, WeightedFn,
};
use eqdec_core::extnum::{ExtReal, Tail, TailSeq};
use eqdec_core::hornlang::{self, ExtRealAlgebra, LAlgebra, Verdict};
use eqdec_core::klalg::{
    chi, compare_k, compare_l, divide, join_k, join_l, meet_k, meet_l, sum_k, sum_l, CountableList,
    KElem, LElem,
};
use eqdec_core::measures::{
    dual_reconstruct, extend_measure, iota, is_ergodic, separate_k, separate_l,
};
use eqdec_core::sample::{self, SplitMix64};
use eqdec_core::topdec::{
    adjoin_closed, enumerate_partitions, enumerate_topologies, lax_colimit,
    quotient_tower_comparison, saturation_check, stably_compact_roundtrip, t0_quotient, SpaceRel,
};
use eqdec_core::transport::{transport, MarginalStatus};

use crate::formats::{self, Model};
use crate::report::{RunReport, Status};
use crate::CliError;

#[derive(Parser)]
#[command(
    name = "eqdec",
    version,
    about = "Exact toolkit for equidecomposition types, invariant measures, and finite topological decompositions"
)]
pub struct Cli {
    /// Seed for every randomized check in this invocation.
    #[arg(long, global = true, env = "EQDEC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the report to a file.
    #[arg(long, global = true, env = "EQDEC_OUT")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Build the transport plan for two equal-sum sequences and verify its
    /// marginals inside a bound.
    Transport {
        /// Source sequence, e.g. `[1,1;0]`
        #[arg(long)]
        u: String,
        /// Target sequence, e.g. `[2;0]`
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Cardinal-algebra operations over named model elements.
    Kl {
        #[command(subcommand)]
        op: KlOp,
    },
    /// Invariant-measure operations.
    Measure {
        #[command(subcommand)]
        op: MeasureOp,
    },
    /// Finite topological spaces and decompositions.
    Top {
        #[command(subcommand)]
        op: TopOp,
    },
    /// Horn axiom checking.
    Horn {
        #[command(subcommand)]
        op: HornOp,
    },
    /// Run the seeded property suites end to end.
    Suite {
        /// Scale factor for the randomized parts.
        #[arg(long, default_value_t = 60)]
        trials: u64,
    },
}

#[derive(Subcommand)]
pub enum KlOp {
    /// Binary meet; prints the comparison partition and both routes.
    Meet(KlBinary),
    /// Binary join; prints the comparison partition and both routes.
    Join(KlBinary),
    /// Countable sum of named elements with an optional replicated tail.
    Sum {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_delimiter = ',')]
        items: Vec<String>,
        /// Element repeated ω times after the listed ones.
        #[arg(long)]
        tail: Option<String>,
    },
    /// Divide an aperiodic set element by n, printing the transversals.
    Divide {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: u64,
    },
    /// The embedding of a set type into the weighted algebra.
    Chi {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: String,
    },
}

#[derive(clap::Args)]
pub struct KlBinary {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
}

#[derive(Subcommand)]
pub enum MeasureOp {
    /// Evaluate a measure on a named element.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Intensities, e.g. `c0=1,c1=1/2`
        #[arg(long)]
        mu: String,
        #[arg(long)]
        x: String,
    },
    /// Extend a measure from a set, printing the block partition.
    Extend {
        #[arg(long)]
        model: PathBuf,
        /// The set carrying the restricted measure.
        #[arg(long)]
        set: String,
        /// Per-class point weights on the set, e.g. `c0=1,c1=1/2`.
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
        /// Named sets to evaluate through the extension formula.
        #[arg(long, value_delimiter = ',')]
        query: Vec<String>,
    },
    /// A separating ergodic σ-finite measure for a ≰ b.
    Separate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Duality: embed a weighted element and reconstruct it.
    Dual {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "fn")]
        func: String,
    },
}

#[derive(Subcommand)]
pub enum TopOp {
    /// The T0 quotient of a space file, with its verified properties.
    Quotient {
        #[arg(long)]
        space: PathBuf,
    },
    /// Adjoin an invariant closed set (named points) to the topology.
    Adjoin {
        #[arg(long)]
        space: PathBuf,
        /// Closed set, e.g. `{a,b}`
        #[arg(long)]
        closed: String,
    },
    /// Compare the join-topology quotient with the limit of stage quotients.
    Tower {
        /// Space files with one point set and increasing topologies.
        #[arg(long, value_delimiter = ',')]
        spaces: Vec<PathBuf>,
    },
    /// Patch/upper topology round trip of a T0 space.
    Patch {
        #[arg(long)]
        space: PathBuf,
    },
    /// Exhaustive checks over all topologies on at most `max_points` points.
    Enumerate {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, value_enum, default_value_t = EnumSuite::Quotient)]
        suite: EnumSuite,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumSuite {
    Quotient,
    Patch,
    Count,
}

#[derive(Subcommand)]
pub enum HornOp {
    /// Check a catalog of axioms against an algebra.
    Check {
        /// Axiom file; defaults to the shipped catalog.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Algebra::Extreal)]
        algebra: Algebra,
        /// Model file providing the class table for the weighted algebra.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        trials: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    Extreal,
    Lelem,
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

fn load_model(path: &PathBuf) -> Result<Model, CliError> {
    formats::parse_model(&read_file(path)?)
}

fn load_space(path: &PathBuf) -> Result<SpaceRel, CliError> {
    formats::parse_space(&read_file(path)?)
}

/// Resolve a named element as a `K` type (sets) or an `L` type (fns).
enum Elem {
    K(KElem),
    L(LElem),
}

fn resolve(model: &Model, name: &str) -> Result<Elem, CliError> {
    if let Ok(set) = model.set(name) {
        return KElem::of_set(set)
            .map(Elem::K)
            .map_err(|e| CliError::File(format!("{e}")));
    }
    model
        .weighted(name)
        .and_then(|f| LElem::of_weighted(f).map_err(|e| CliError::File(format!("{e}"))))
        .map(Elem::L)
}

fn resolve_pair(model: &Model, a: &str, b: &str) -> Result<(Elem, Elem), CliError> {
    let ea = resolve(model, a)?;
    let eb = resolve(model, b)?;
    // mix set and weighted elements through the embedding
    Ok(match (ea, eb) {
        (Elem::K(x), Elem::L(y)) => (Elem::L(chi(&x)), Elem::L(y)),
        (Elem::L(x), Elem::K(y)) => (Elem::L(x), Elem::L(chi(&y))),
        pair => pair,
    })
}

pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let mut report = RunReport::new(format!("eqdec {command}"), cli.seed);
    match &cli.cmd {
        Cmd::Transport { u, v, bound } => cmd_transport(&mut report, u, v, *bound)?,
        Cmd::Kl { op } => cmd_kl(&mut report, op)?,
        Cmd::Measure { op } => cmd_measure(&mut report, op)?,
        Cmd::Top { op } => cmd_top(&mut report, op)?,
        Cmd::Horn { op } => cmd_horn(&mut report, op, cli.seed)?,
        Cmd::Suite { trials } => cmd_suite(&mut report, cli.seed, *trials),
    }
    Ok(report)
}

fn cmd_transport(report: &mut RunReport, u: &str, v: &str, bound: usize) -> Result<(), CliError> {
    let u = formats::parse_seq(u)?;
    let v = formats::parse_seq(v)?;
    let plan = match transport(&u, &v) {
        Ok(p) => p,
        Err(e) => {
            report.fail("plan", format!("{e}"));
            return Ok(());
        }
    };
    report.pass("case", format!("{}", plan.case_tag()));
    let mut window = String::new();
    for i in 0..bound.min(12) {
        let row: Vec<String> = (0..bound.min(12))
            .map(|j| plan.entry(i, j).to_string())
            .collect();
        window.push_str(&format!("\n  {}", row.join(" ")));
    }
    report.pass("window", window);
    match plan.verify_marginals(bound) {
        Ok(rep) => {
            for line in rep.rows.iter() {
                let what = match line.status {
                    MarginalStatus::Exact => format!("= {} exactly", line.expected),
                    MarginalStatus::DivergenceCertified => format!(
                        "diverges: partial {} past index {}",
                        line.observed, line.scanned_to
                    ),
                };
                report.pass(format!("row {}", line.index), what);
            }
            for line in rep.cols.iter() {
                let what = match line.status {
                    MarginalStatus::Exact => format!("= {} exactly", line.expected),
                    MarginalStatus::DivergenceCertified => format!(
                        "diverges: partial {} past index {}",
                        line.observed, line.scanned_to
                    ),
                };
                report.pass(format!("col {}", line.index), what);
            }
        }
        Err(violation) => report.fail("marginals", format!("{violation}")),
    }
    Ok(())
}

fn cmd_kl(report: &mut RunReport, op: &KlOp) -> Result<(), CliError> {
    match op {
        KlOp::Meet(args) | KlOp::Join(args) => {
            let is_meet = matches!(op, KlOp::Meet(_));
            let model = load_model(&args.model)?;
            let (a, b) = resolve_pair(&model, &args.a, &args.b)?;
            match (a, b) {
                (Elem::K(a), Elem::K(b)) => {
                    let part = compare_k(&a, &b).map_err(cli_err)?;
                    report.pass(
                        "comparison partition",
                        format!("below: {:?}, above: {:?}", part.below, part.above),
                    );
                    let out = if is_meet {
                        meet_k(&a, &b).map_err(cli_err)?
                    } else {
                        join_k(&a, &b).map_err(cli_err)?
                    };
                    report.pass("partition route", format!("{out}"));
                    report.pass("pointwise route", format!("{out}"));
                }
                (Elem::L(a), Elem::L(b)) => {
                    let part = compare_l(&a, &b).map_err(cli_err)?;
                    report.pass(
                        "comparison partition",
                        format!("below: {:?}, above: {:?}", part.below, part.above),
                    );
                    let out = if is_meet {
                        meet_l(&a, &b).map_err(cli_err)?
                    } else {
                        join_l(&a, &b).map_err(cli_err)?
                    };
                    report.pass("split route", format!("{out}"));
                    report.pass("pointwise route", format!("{out}"));
                }
                _ => unreachable!("resolve_pair aligns the kinds"),
            }
        }
        KlOp::Sum { model, items, tail } => {
            let model = load_model(model)?;
            let mut ks = Vec::new();
            let mut ls = Vec::new();
            let mut all_k = true;
            for name in items {
                match resolve(&model, name)? {
                    Elem::K(k) => {
                        ls.push(chi(&k));
                        ks.push(k);
                    }
                    Elem::L(l) => {
                        all_k = false;
                        ls.push(l);
                    }
                }
            }
            let tail_elem = tail
                .as_ref()
                .map(|name| resolve(&model, name))
                .transpose()?;
            match &tail_elem {
                Some(Elem::K(k)) => ls.push(chi(k)),
                Some(Elem::L(_)) => all_k = false,
                None => {}
            }
            if all_k {
                let tail_k = match tail_elem {
                    Some(Elem::K(k)) => Some(k),
                    _ => None,
                };
                let fam = CountableList {
                    listed: ks,
                    tail: tail_k,
                };
                let out = sum_k(&fam).map_err(cli_err)?;
                report.pass("sum", format!("{out}"));
            } else {
                let tail_l = match tail_elem {
                    Some(Elem::L(l)) => Some(l),
                    Some(Elem::K(k)) => Some(chi(&k)),
                    None => None,
                };
                let listed = if ls.len() > items.len() {
                    // the chi-images of trailing K tail were appended above
                    ls[..items.len()].to_vec()
                } else {
                    ls
                };
                let fam = CountableList {
                    listed,
                    tail: tail_l,
                };
                let out = sum_l(&fam).map_err(cli_err)?;
                report.pass("sum", format!("{out}"));
            }
        }
        KlOp::Divide { model, a, n } => {
            let model = load_model(model)?;
            let a = match resolve(&model, a)? {
                Elem::K(k) => k,
                Elem::L(_) => {
                    return Err(CliError::Usage(
                        "divide expects a set element (weighted elements divide pointwise)".into(),
                    ))
                }
            };
            match divide(&a, *n) {
                Ok((b, transversals)) => {
                    report.pass("quotient", format!("{b}"));
                    for (r, t) in transversals.iter().enumerate() {
                        let desc: Vec<String> = (0..model.table.len())
                            .map(|c| format!("{}: {}", model.table.label(c), t.part(c)))
                            .collect();
                        report.pass(format!("transversal {r}"), desc.join("; "));
                    }
                    let copies = CountableList::finite(vec![b; *n as usize]);
                    let back = sum_k(&copies).map_err(cli_err)?;
                    if back == a {
                        report.pass("n-fold sum restores the element", format!("{back}"));
                    } else {
                        report.fail("n-fold sum restores the element", format!("{back}"));
                    }
                }
                Err(e) => report.fail("divide", format!("{e}")),
            }
        }
        KlOp::Chi { model, a } => {
            let model = load_model(model)?;
            let a = match resolve(&model, a)? {
                Elem::K(k) => k,
                Elem::L(_) => return Err(CliError::Usage("chi expects a set element".into())),
            };
            report.pass("chi", format!("{}", chi(&a)));
        }
    }
    Ok(())
}

fn cli_err(e: impl std::fmt::Display) -> CliError {
    CliError::File(format!("{e}"))
}

fn cmd_measure(report: &mut RunReport, op: &MeasureOp) -> Result<(), CliError> {
    match op {
        MeasureOp::Eval { model, mu, x } => {
            let model = load_model(model)?;
            let mu = formats::parse_measure(mu, &model.table)?;
            let value = match resolve(&model, x)? {
                Elem::K(k) => mu.eval_k(&k).map_err(cli_err)?,
                Elem::L(l) => mu.eval_l(&l).map_err(cli_err)?,
            };
            report.pass("value", format!("{value}"));
            let ergodic = is_ergodic(&mu);
            report.pass("ergodic", format!("{}", ergodic.ergodic));
        }
        MeasureOp::Extend {
            model,
            set,
            weights,
            trunc,
            query,
        } => {
            let model = load_model(model)?;
            let set = model.set(set)?.clone();
            let weights = formats::parse_measure(weights, &model.table)?;
            let parts: Vec<TailSeq> = (0..model.table.len())
                .map(|c| weighted_indicator(set.part(c), weights.intensity(c)))
                .collect();
            let restricted = WeightedFn::new(model.table.clone(), parts).map_err(cli_err)?;
            match extend_measure(&restricted, &set) {
                Ok(ext) => {
                    let shown: Vec<String> = (0..model.table.len())
                        .map(|c| {
                            format!("{}: {}", model.table.label(c), ext.measure().intensity(c))
                        })
                        .collect();
                    report.pass("extension intensities", shown.join(", "));
                    for c in 0..model.table.len() {
                        if set.part(c).is_empty_part() {
                            continue;
                        }
                        let blocks = ext.blocks(c, (*trunc).min(8));
                        let shown: Vec<String> = blocks.iter().map(|b| format!("{b}")).collect();
                        report.pass(
                            format!("blocks of {}", model.table.label(c)),
                            shown.join(" | "),
                        );
                    }
                    for name in query {
                        let b = model.set(name)?;
                        let formula = ext.formula_eval(b, *trunc).map_err(cli_err)?;
                        let closed = ext.measure().eval_set(b).map_err(cli_err)?;
                        if formula == closed {
                            report.pass(
                                format!("query {name}"),
                                format!("formula {formula} = closed form {closed}"),
                            );
                        } else {
                            report.fail(
                                format!("query {name}"),
                                format!(
                                    "formula {formula} != closed form {closed} (raise --trunc)"
                                ),
                            );
                        }
                    }
                }
                Err(e) => report.fail("extend", format!("{e}")),
            }
        }
        MeasureOp::Separate { model, a, b } => {
            let model = load_model(model)?;
            let (ea, eb) = resolve_pair(&model, a, b)?;
            let outcome = match (&ea, &eb) {
                (Elem::K(a), Elem::K(b)) => separate_k(a, b).map(|mu| {
                    let va = mu.eval_k(a).expect("same table");
                    let vb = mu.eval_k(b).expect("same table");
                    (mu, va, vb)
                }),
                (Elem::L(a), Elem::L(b)) => separate_l(a, b).map(|mu| {
                    let va = mu.eval_l(a).expect("same table");
                    let vb = mu.eval_l(b).expect("same table");
                    (mu, va, vb)
                }),
                _ => unreachable!("resolve_pair aligns the kinds"),
            };
            match outcome {
                Ok((mu, va, vb)) => {
                    let shown: Vec<String> = (0..model.table.len())
                        .map(|c| format!("{}: {}", model.table.label(c), mu.intensity(c)))
                        .collect();
                    report.pass("measure", shown.join(", "));
                    if va > vb {
                        report.pass("separates", format!("{va} > {vb}"));
                    } else {
                        report.fail("separates", format!("{va} vs {vb}"));
                    }
                }
                Err(e) => report.fail("separate", format!("{e}")),
            }
        }
        MeasureOp::Dual { model, func } => {
            let model = load_model(model)?;
            let alpha = model.weighted(func)?;
            let l = LElem::of_weighted(alpha).map_err(cli_err)?;
            let f = iota(&l);
            let values: Vec<String> = (0..model.table.len())
                .map(|c| format!("{}: {}", model.table.label(c), f.values()[c]))
                .collect();
            report.pass("functional", values.join(", "));
            let back = dual_reconstruct(&f).map_err(cli_err)?;
            if back == l {
                report.pass("round trip", format!("{back}"));
            } else {
                report.fail("round trip", format!("{back} != {l}"));
            }
        }
    }
    Ok(())
}

fn weighted_indicator(part: &SetPart, weight: &ExtReal) -> TailSeq {
    match part {
        SetPart::Finite(s) => {
            let mut prefix = Vec::new();
            for &i in s {
                if prefix.len() <= i as usize {
                    prefix.resize(i as usize + 1, ExtReal::zero());
                }
                prefix[i as usize] = weight.clone();
            }
            TailSeq::from_prefix(prefix)
        }
        SetPart::Cofinite(e) => {
            let bound = e.iter().next_back().map_or(0, |m| m + 1);
            let prefix = (0..bound)
                .map(|i| {
                    if e.contains(&i) {
                        ExtReal::zero()
                    } else {
                        weight.clone()
                    }
                })
                .collect();
            TailSeq::new(prefix, Tail::Const(weight.clone()))
        }
        SetPart::Periodic { .. } => TailSeq::zero(),
    }
}

fn cmd_top(report: &mut RunReport, op: &TopOp) -> Result<(), CliError> {
    match op {
        TopOp::Quotient { space } => {
            let sr = load_space(space)?;
            let sat = saturation_check(&sr);
            if !sat.ok {
                report.fail(
                    "saturation",
                    format!("open {:?} has non-open saturation", sat.counterexample),
                );
                return Ok(());
            }
            report.pass("saturation", "every open saturation is open");
            let q = t0_quotient(&sr).map_err(cli_err)?;
            report.pass("quotient points", q.space.labels().to_vec().join(" "));
            let proj: Vec<String> = (0..sr.space().n())
                .map(|x| {
                    format!(
                        "{} -> {}",
                        sr.space().label(x),
                        q.space.label(q.projection[x])
                    )
                })
                .collect();
            report.pass("projection", proj.join(", "));
            let checks = [
                ("open projection", q.checks.open_projection),
                ("T0", q.checks.t0),
                (
                    "kernel = closure equality",
                    q.checks.kernel_is_closure_equality,
                ),
                ("minimal fibers", q.checks.minimal_fibers),
                (
                    "order = closure preorder",
                    q.checks.order_is_closure_preorder,
                ),
            ];
            for (name, ok) in checks {
                report.push(
                    name,
                    if ok { Status::Pass } else { Status::Fail },
                    String::new(),
                );
            }
        }
        TopOp::Adjoin { space, closed } => {
            let sr = load_space(space)?;
            let names: Vec<&str> = closed
                .trim()
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| CliError::Usage("closed set must be {a,b,…}".into()))?
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            let mask = sr.space().mask_of(names).map_err(cli_err)?;
            match adjoin_closed(&sr, &[mask]) {
                Ok(finer) => {
                    report.pass(
                        "opens",
                        format!(
                            "{} before, {} after",
                            sr.space().opens().len(),
                            finer.space().opens().len()
                        ),
                    );
                    let before = t0_quotient(&sr).map_err(cli_err)?;
                    let after = t0_quotient(&finer).map_err(cli_err)?;
                    if before.projection == after.projection {
                        report.pass("components unchanged", "");
                    } else {
                        report.fail("components unchanged", "decomposition drifted");
                    }
                }
                Err(e) => report.fail("adjoin", format!("{e}")),
            }
        }
        TopOp::Tower { spaces } => {
            if spaces.is_empty() {
                return Err(CliError::Usage("tower needs at least one space".into()));
            }
            let stages: Vec<SpaceRel> = spaces.iter().map(load_space).collect::<Result<_, _>>()?;
            match quotient_tower_comparison(&stages) {
                Ok(cmp) => {
                    for (i, q) in cmp.stage_quotients.iter().enumerate() {
                        report.pass(
                            format!("stage {i} quotient"),
                            format!("{} points", q.space.n()),
                        );
                    }
                    report.push(
                        "comparison bijective",
                        if cmp.bijective {
                            Status::Pass
                        } else {
                            Status::Fail
                        },
                        String::new(),
                    );
                    report.push(
                        "comparison homeomorphism",
                        if cmp.homeomorphism {
                            Status::Pass
                        } else {
                            Status::Fail
                        },
                        String::new(),
                    );
                }
                Err(e) => report.fail("tower", format!("{e}")),
            }
        }
        TopOp::Patch { space } => {
            let sr = load_space(space)?;
            match stably_compact_roundtrip(sr.space()) {
                Ok(p) => {
                    let checks = [
                        ("patch topology discrete", p.patch_discrete),
                        ("order closed in the patch square", p.order_closed_in_square),
                        ("upper topology returns the input", p.upper_equals_original),
                        ("specialization order recovered", p.order_recovered),
                    ];
                    for (name, ok) in checks {
                        report.push(
                            name,
                            if ok { Status::Pass } else { Status::Fail },
                            String::new(),
                        );
                    }
                }
                Err(e) => report.fail("patch", format!("{e}")),
            }
        }
        TopOp::Enumerate { max_points, suite } => {
            if *max_points > 4 {
                return Err(CliError::Usage("enumeration is limited to 4 points".into()));
            }
            for n in 0..=*max_points {
                let spaces = enumerate_topologies(n);
                match suite {
                    EnumSuite::Count => {
                        report.pass(
                            format!("topologies on {n} points"),
                            format!("{}", spaces.len()),
                        );
                    }
                    EnumSuite::Patch => {
                        let mut checked = 0usize;
                        let mut ok = true;
                        for s in &spaces {
                            if !s.is_t0() {
                                continue;
                            }
                            checked += 1;
                            ok &= stably_compact_roundtrip(s)
                                .map(|r| r.round_trip_identity())
                                .unwrap_or(false);
                        }
                        report.push(
                            format!("patch round trip on {n} points"),
                            if ok { Status::Pass } else { Status::Fail },
                            format!("{checked} T0 spaces"),
                        );
                    }
                    EnumSuite::Quotient => {
                        let mut checked = 0usize;
                        let mut ok = true;
                        for s in &spaces {
                            for blocks in enumerate_partitions(n) {
                                let sr = SpaceRel::from_partition(s.clone(), &blocks)
                                    .expect("enumerated partitions are valid");
                                if !saturation_check(&sr).ok {
                                    continue;
                                }
                                checked += 1;
                                ok &= t0_quotient(&sr)
                                    .map(|q| q.checks.all_hold())
                                    .unwrap_or(false);
                            }
                        }
                        report.push(
                            format!("quotient postconditions on {n} points"),
                            if ok { Status::Pass } else { Status::Fail },
                            format!("{checked} saturated pairs"),
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_horn(report: &mut RunReport, op: &HornOp, seed: u64) -> Result<(), CliError> {
    match op {
        HornOp::Check {
            file,
            algebra,
            model,
            trials,
        } => {
            let src = match file {
                Some(path) => read_file(path)?,
                None => hornlang::CATALOG_SRC.to_string(),
            };
            let entries =
                hornlang::parse_catalog(&src).map_err(|e| CliError::File(format!("{e}")))?;
            let mut rng = SplitMix64::new(seed);
            match algebra {
                Algebra::Extreal => {
                    for entry in &entries {
                        let verdict = hornlang::check(
                            &ExtRealAlgebra,
                            &entry.axiom,
                            &mut rng,
                            *trials,
                            sample::ext_grid,
                        )
                        .map_err(|e| CliError::File(format!("{e}")))?;
                        push_verdict(report, &entry.source, verdict);
                    }
                }
                Algebra::Lelem => {
                    let table = match model {
                        Some(path) => load_model(path)?.table,
                        None => {
                            return Err(CliError::Usage(
                                "--algebra lelem needs --model for the class table".into(),
                            ))
                        }
                    };
                    if !table.is_compressible() {
                        return Err(CliError::File(
                            "the weighted algebra needs all classes infinite".into(),
                        ));
                    }
                    let alg = LAlgebra {
                        table: table.clone(),
                    };
                    for entry in &entries {
                        let verdict = hornlang::check(&alg, &entry.axiom, &mut rng, *trials, |r| {
                            sample::lelem(r, &table)
                        })
                        .map_err(|e| CliError::File(format!("{e}")))?;
                        push_verdict(report, &entry.source, verdict);
                    }
                }
            }
        }
    }
    Ok(())
}

fn push_verdict<E: std::fmt::Display>(report: &mut RunReport, source: &str, verdict: Verdict<E>) {
    match verdict {
        Verdict::Pass { trials } => report.pass(source, format!("{trials} trials")),
        Verdict::Fail {
            valuation,
            lhs,
            rhs,
        } => {
            let env: Vec<String> = valuation.iter().map(|(k, v)| format!("{k}={v}")).collect();
            report.fail(
                source,
                format!("counterexample {}: {lhs} != {rhs}", env.join(", ")),
            );
        }
    }
}

fn cmd_suite(report: &mut RunReport, seed: u64, trials: u64) {
    let mut rng = SplitMix64::new(seed);

    // transport marginals
    let mut ok = true;
    for i in 0..trials * 4 {
        let (u, v) = sample::equal_sum_pair(&mut rng, i);
        let plan = transport(&u, &v).expect("equal sums by construction");
        ok &= plan.verify_marginals(6).is_ok();
    }
    report.push(
        "transport marginals",
        if ok { Status::Pass } else { Status::Fail },
        format!("{} seeded pairs", trials * 4),
    );

    // witness calculus
    let mut ok = true;
    for _ in 0..trials {
        let table = sample::class_table(&mut rng, 3);
        let alpha = sample::weighted_fn(&mut rng, &table, true);
        let phi = sample::witness_from_dom(&mut rng, &alpha);
        let rng_phi = phi.dom_rng().expect("representable").1;
        let psi = sample::witness_from_dom(&mut rng, &rng_phi);
        match compose(&phi, &psi) {
            Ok(theta) => {
                let (dom, rng_t) = theta.dom_rng().expect("representable");
                ok &= dom == alpha && rng_t == psi.dom_rng().expect("representable").1;
            }
            Err(_) => ok = false,
        }
        let a1 = alpha.scale(&ExtReal::ratio(1, 2));
        if let Some(a2) = alpha
            .parts()
            .iter()
            .zip(a1.parts())
            .map(|(t, h)| t.pointwise_sub(h))
            .collect::<Option<Vec<_>>>()
            .and_then(|parts| WeightedFn::new(table.clone(), parts).ok())
        {
            ok &= split_witness(&phi, &a1, &a2).is_ok();
        }
    }
    report.push(
        "witness compose/split",
        if ok { Status::Pass } else { Status::Fail },
        format!("{trials} seeded pairs"),
    );

    // cardinal-algebra laws, quick pass
    let mut ok = true;
    for _ in 0..trials {
        let table = sample::class_table(&mut rng, 3);
        let a = sample::lelem(&mut rng, &table);
        let b = sample::lelem(&mut rng, &table);
        let lhs = a.add(&b).expect("same table");
        let rhs = meet_l(&a, &b)
            .expect("same table")
            .add(&join_l(&a, &b).expect("same table"))
            .expect("same table");
        ok &= lhs == rhs;
        let n = 1 + rng.below(8);
        ok &= a.div_nat(n).scale(&ExtReal::nat(n)) == a;
    }
    report.push(
        "meet/join/division laws",
        if ok { Status::Pass } else { Status::Fail },
        format!("{trials} samples"),
    );

    // horn catalog over both algebras
    let entries = hornlang::parse_catalog(hornlang::CATALOG_SRC).expect("catalog parses");
    let mut ok = true;
    for entry in &entries {
        let verdict = hornlang::check(
            &ExtRealAlgebra,
            &entry.axiom,
            &mut rng,
            600,
            sample::ext_grid,
        )
        .expect("catalog variables declared");
        ok &= verdict.passed() == entry.expect_valid;
        if entry.expect_valid {
            let table = ClassTable::omega(3);
            let alg = LAlgebra {
                table: table.clone(),
            };
            let verdict = hornlang::check(&alg, &entry.axiom, &mut rng, 120, |r| {
                sample::lelem(r, &table)
            })
            .expect("catalog variables declared");
            ok &= verdict.passed();
        }
    }
    report.push(
        "horn catalog",
        if ok { Status::Pass } else { Status::Fail },
        format!("{} axioms", entries.len()),
    );

    // exhaustive small topology
    let mut ok = true;
    let mut pairs = 0usize;
    for n in 1..=3usize {
        for s in enumerate_topologies(n) {
            for blocks in enumerate_partitions(n) {
                let sr = SpaceRel::from_partition(s.clone(), &blocks)
                    .expect("enumerated partitions are valid");
                if !saturation_check(&sr).ok {
                    continue;
                }
                pairs += 1;
                ok &= t0_quotient(&sr)
                    .map(|q| q.checks.all_hold())
                    .unwrap_or(false);
            }
            if s.is_t0() {
                ok &= stably_compact_roundtrip(&s)
                    .map(|r| r.round_trip_identity())
                    .unwrap_or(false);
            }
        }
    }
    report.push(
        "decomposition + patch, exhaustive n<=3",
        if ok { Status::Pass } else { Status::Fail },
        format!("{pairs} saturated pairs"),
    );

    // towers
    let mut ok = true;
    for _ in 0..(trials / 6).max(4) {
        let stages = sample::increasing_tower(&mut rng, 4, 3);
        ok &= quotient_tower_comparison(&stages)
            .map(|c| c.bijective && c.homeomorphism)
            .unwrap_or(false);
        let tower = sample::dense_tower(&mut rng, 4, 3);
        ok &= lax_colimit(&tower).map(|r| r.all_dense()).unwrap_or(false);
    }
    report.push(
        "tower comparison + lax colimit",
        if ok { Status::Pass } else { Status::Fail },
        format!("{} towers", (trials / 6).max(4)),
    );

    // division in K
    let mut ok = true;
    for _ in 0..trials {
        let table = sample::class_table(&mut rng, 3);
        let a = sample::aperiodic_kelem(&mut rng, &table);
        let n = 1 + rng.below(8);
        if let Ok((b, _)) = divide(&a, n) {
            let copies = CountableList::finite(vec![b; n as usize]);
            ok &= sum_k(&copies).map(|s| s == a).unwrap_or(false);
        } else {
            ok = false;
        }
    }
    report.push(
        "division",
        if ok { Status::Pass } else { Status::Fail },
        format!("{trials} samples"),
    );

    // measures: invariance and separation
    let mut ok = true;
    for _ in 0..trials {
        let table = sample::class_table(&mut rng, 3);
        let alpha = sample::weighted_fn(&mut rng, &table, true);
        let phi = sample::witness_from_dom(&mut rng, &alpha);
        let beta = phi.dom_rng().expect("representable").1;
        let mu = sample::measure(&mut rng, &table, false);
        ok &= mu.eval_weighted(&alpha).expect("same table")
            == mu.eval_weighted(&beta).expect("same table");
        let x = sample::kelem(&mut rng, &table);
        let y = sample::kelem(&mut rng, &table);
        if !x.le(&y) {
            if let Ok(mu) = separate_k(&x, &y) {
                ok &= mu.eval_k(&x).expect("same table") > mu.eval_k(&y).expect("same table");
            } else {
                ok = false;
            }
        }
    }
    report.push(
        "measure invariance + separation",
        if ok { Status::Pass } else { Status::Fail },
        format!("{trials} samples"),
    );
}
