use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use symdyn::decomp::{
    check_w_specification, diagram_decomposition, enumerate_left_constraints, enumerate_right_constraints,
    filler_decomposition, natural_coded_decomposition, obstruction_upper_bound, theoremc_multiplicity, Case,
    Decomposition,
};
use symdyn::entropy::{automaton_entropy, gap_entropy_root, growth_entropy, perron_entropy};
use symdyn::ergopt::{glue_subshift, max_ergodic_average, maximizer_entropy_profile};
use symdyn::hofbauer::{build_diagram, MapSpec, PiecewiseMonotoneMap};
use symdyn::lang::{accepted_profile, count_profile, enumerate_words, LanguageOracle};
use symdyn::scalar::{parse_rational, Scalar};
use symdyn::thermo::{
    equilibrium_markov, measure_entropy, pressure, weak_gibbs_audit, zero_temperature_path, BlockGraph,
    LocallyConstantPotential,
};
use symdyn::word::parse_word_lines;
use symdyn::zoo::{build_fat_sgap, GapSet, ShiftSpec};
use symdyn::Rational;

use crate::args::{
    CaseChoice, Cli, Command, DecompositionArgs, DecompositionKind, EntropyMethod, PotentialArgs, ShiftArgs, Side,
};
use crate::output::Emitter;
use crate::Failure;

type Out<'a, W> = &'a mut Emitter<W>;
type Run = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_spec(text: &str) -> Result<ShiftSpec, Failure> {
    text.parse().map_err(|e: symdyn::Error| usage(format!("shift spec {text:?}: {e}")))
}

fn parse_gaps(text: &str) -> Result<GapSet, Failure> {
    text.parse().map_err(|e: symdyn::Error| usage(format!("gap set {text:?}: {e}")))
}

fn load_shift(args: &ShiftArgs) -> Result<(ShiftSpec, Arc<dyn LanguageOracle>), Failure> {
    let spec = parse_spec(&args.shift)?;
    let lang = spec.build(args.horizon).map_err(|e| usage(format!("shift {}: {e}", args.shift)))?;
    Ok((spec, lang))
}

fn load_map(text: &str) -> Result<MapSpec, Failure> {
    if let Some(path) = text.strip_prefix("pwm:file=") {
        MapSpec::from_branch_table(&read_file(Path::new(path))?).map_err(|e| usage(format!("map file {path}: {e}")))
    } else {
        text.parse().map_err(|e: symdyn::Error| usage(format!("map spec {text:?}: {e}")))
    }
}

/// `start:ratio:end` as a geometric schedule, or a comma list.
fn parse_betas(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || usage(format!("beta schedule {text:?} is neither start:ratio:end nor a comma list"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let betas: Vec<f64> = match text.split(':').collect::<Vec<_>>()[..] {
        [start, ratio, end] => {
            let (start, ratio, end) = (num(start)?, num(ratio)?, num(end)?);
            if !(start > 0.0 && ratio > 1.0 && end >= start) {
                return Err(usage("geometric schedule needs start > 0, ratio > 1 and end >= start"));
            }
            let mut out = vec![start];
            let mut k = 1;
            loop {
                let b = start * ratio.powi(k);
                if b > end * (1.0 + 1e-12) {
                    break;
                }
                out.push(b);
                k += 1;
            }
            out
        }
        [_] => text.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(bad()),
    };
    if betas.windows(2).any(|w| w[1] <= w[0]) || betas.iter().any(|b| !b.is_finite()) {
        return Err(usage("beta schedule must be finite and increasing"));
    }
    Ok(betas)
}

fn load_potential<T: Scalar>(
    lang: &dyn LanguageOracle,
    path: Option<&Path>,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<LocallyConstantPotential<T>, Failure> {
    let pot = match path {
        Some(p) => LocallyConstantPotential::parse(lang, &read_file(p)?, parse),
        None => LocallyConstantPotential::constant(lang, T::zero()),
    };
    pot.map_err(|e| usage(format!("potential: {e}")))
}

fn parse_float(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().or_else(|| parse_rational(s).map(|r| r.to_f64_lossy()))
}

const APPROXIMATION_BLOCK: usize = 4;

/// Transfer graph for the potential, with a note when the shift is only
/// approximated by its block presentation.
fn block_graph<T: Scalar>(
    spec: &ShiftSpec,
    lang: &dyn LanguageOracle,
    pot: &LocallyConstantPotential<T>,
    block: Option<usize>,
) -> Result<(BlockGraph, Option<String>), Failure> {
    let needed = match spec.memory() {
        Some(m) => pot.range().max(m + 1),
        None => pot.range().max(APPROXIMATION_BLOCK),
    };
    let q = block.unwrap_or(needed);
    if q < pot.range() {
        return Err(usage(format!("block length {q} is shorter than the potential range {}", pot.range())));
    }
    let note = match spec.memory() {
        Some(m) if q > m => None,
        Some(m) => {
            Some(format!("block length {q} does not cover the shift memory {m}; results are for an approximation"))
        }
        None => Some(format!("{spec} is not of finite type; results are for its {q}-block Markov approximation")),
    };
    Ok((BlockGraph::new(lang, q)?, note))
}

struct Thermo {
    spec: ShiftSpec,
    lang: Arc<dyn LanguageOracle>,
    pot: LocallyConstantPotential<f64>,
    blocks: BlockGraph,
    note: Option<String>,
}

fn load_thermo(args: &PotentialArgs) -> Result<Thermo, Failure> {
    let (spec, lang) = load_shift(&args.shift)?;
    let pot = load_potential(lang.as_ref(), args.pot.as_deref(), parse_float)?;
    let (blocks, note) = block_graph(&spec, lang.as_ref(), &pot, args.block)?;
    Ok(Thermo { spec, lang, pot, blocks, note })
}

pub fn run<W: Write>(cli: &Cli, out: Out<W>) -> Run {
    match &cli.command {
        Command::Entropy { shift, method, n, tol, max_states } => entropy(out, shift, *method, *n, *tol, *max_states),
        Command::Count { shift, n } => {
            let (spec, lang) = load_shift(shift)?;
            let counts: Vec<String> = count_profile(&lang, *n)?.iter().map(|c| c.to_string()).collect();
            out.emit("counts", json!({ "shift": spec.to_string(), "n": n, "counts": counts }))?;
            Ok(())
        }
        Command::Words { shift, n, limit } => {
            let (spec, lang) = load_shift(shift)?;
            let words = enumerate_words(&lang, *n)?;
            let shown: Vec<String> = words.iter().take(limit.unwrap_or(usize::MAX)).map(|w| w.to_string()).collect();
            out.emit(
                "words",
                json!({ "shift": spec.to_string(), "n": n, "count": words.len(), "truncated": shown.len() < words.len(), "words": shown }),
            )?;
            Ok(())
        }
        Command::Decompose { source, n } => with_decomposition(source, |d| decompose(out, d, *n)),
        Command::SpecCheck { source, m, tmax, len } => with_decomposition(source, |d| {
            let cert = check_w_specification(d, *m, *tmax, *len, cli.seed)?;
            out.emit("spec_certificate", json!({ "decomposition": d.describe(), "certificate": cert }))?;
            Ok(())
        }),
        Command::Constraints { shift, n, ext, side } => {
            let (spec, lang) = load_shift(shift)?;
            let sides: &[(&str, bool)] = match side {
                Side::Left => &[("left", true)],
                Side::Right => &[("right", false)],
                Side::Both => &[("left", true), ("right", false)],
            };
            for &(name, left) in sides {
                let found = if left {
                    enumerate_left_constraints(lang.as_ref(), *n, *ext)?
                } else {
                    enumerate_right_constraints(lang.as_ref(), *n, *ext)?
                };
                out.emit(
                    "constraints",
                    json!({ "shift": spec.to_string(), "side": name, "n": n, "ext": ext, "count": found.len(), "constraints": found }),
                )?;
            }
            Ok(())
        }
        Command::Hofbauer { map, depth, float, export } => {
            let spec = load_map(map)?;
            if spec.is_rational() && !float {
                let m = spec.build_exact().map_err(|e| usage(format!("map: {e}")))?;
                hofbauer(out, &m, *depth, export.as_deref(), "exact")
            } else {
                let m = spec.build_float().map_err(|e| usage(format!("map: {e}")))?;
                hofbauer(out, &m, *depth, export.as_deref(), "float")
            }
        }
        Command::Pressure { pot, beta } => {
            let t = load_thermo(pot)?;
            let report = pressure(&t.blocks, &t.pot, *beta)?;
            out.emit(
                "pressure",
                json!({ "shift": t.spec.to_string(), "block": t.blocks.q(), "note": t.note, "pressure": report }),
            )?;
            Ok(())
        }
        Command::Equilibrium { pot, beta, n } => {
            let t = load_thermo(pot)?;
            let mu = equilibrium_markov(&t.blocks, &t.pot, *beta)?;
            let p = pressure(&t.blocks, &t.pot, *beta)?;
            let words = mu.support_words(*n);
            let audit = weak_gibbs_audit(t.lang.as_ref(), &mu, &t.pot, *beta, p.value, &words)?;
            out.emit(
                "equilibrium",
                json!({
                    "shift": t.spec.to_string(),
                    "block": t.blocks.q(),
                    "note": t.note,
                    "beta": beta,
                    "pressure": p.value,
                    "entropy": measure_entropy(&mu),
                    "integral": mu.integral(&t.pot)?,
                    "gibbs_audit": audit,
                    "measure": mu.summary(),
                }),
            )?;
            Ok(())
        }
        Command::Zerotemp { pot, betas } => {
            let betas = parse_betas(betas)?;
            let t = load_thermo(pot)?;
            for point in zero_temperature_path(&t.blocks, &t.pot, &betas)? {
                out.emit(
                    "zerotemp",
                    json!({
                        "shift": t.spec.to_string(),
                        "note": t.note,
                        "beta": point.beta,
                        "pressure": point.pressure,
                        "entropy": point.entropy,
                        "integral": point.integral,
                    }),
                )?;
            }
            Ok(())
        }
        Command::Maximize { pot, float } => maximize(out, pot, *float),
        Command::Glue { shift, words, t, max_states } => {
            let (spec, lang) = load_shift(shift)?;
            let list = parse_word_lines(&read_file(words)?).map_err(|e| usage(format!("word file: {e}")))?;
            let glued = glue_subshift(lang.as_ref(), &list, *t)?;
            let h = automaton_entropy(&glued.shift, *max_states)?;
            let generators: Vec<String> = glued.generators.iter().map(|w| w.to_string()).collect();
            out.emit(
                "glue",
                json!({ "shift": spec.to_string(), "summary": glued.summary, "generator_words": generators, "entropy": h }),
            )?;
            Ok(())
        }
        Command::Profile { pot, betas } => {
            let betas = parse_betas(betas)?;
            let t = load_thermo(pot)?;
            let profile = maximizer_entropy_profile(&t.blocks, &t.pot, &betas)?;
            out.emit("profile", json!({ "shift": t.spec.to_string(), "note": t.note, "profile": profile }))?;
            Ok(())
        }
        Command::Theoremc { n_symbols, ell, case, gaps, kind } => {
            let gaps = parse_gaps(gaps)?;
            if *ell == 0 || *ell > 6 {
                return Err(usage("ell must lie in 1..=6"));
            }
            let horizon = (2usize << ell) + 1;
            let lang = build_fat_sgap(gaps, *n_symbols, horizon).map_err(|e| usage(e.to_string()))?;
            let case = match case {
                CaseChoice::Auto => None,
                CaseChoice::One => Some(Case::One),
                CaseChoice::Two => Some(Case::Two),
            };
            let kind = kind.unwrap_or(if case == Some(Case::One) {
                DecompositionKind::Filler
            } else {
                DecompositionKind::Natural
            });
            let report = match kind {
                DecompositionKind::Natural => {
                    theoremc_multiplicity(&natural_coded_decomposition(&lang)?, *n_symbols, *ell, case, None)?
                }
                DecompositionKind::Filler => {
                    theoremc_multiplicity(&filler_decomposition(&lang), *n_symbols, *ell, case, None)?
                }
                DecompositionKind::Hofbauer => return Err(usage("theoremc takes the natural or filler decomposition")),
            };
            let passed = report.passed();
            out.emit("theoremc", json!({ "kind": kind, "passed": passed, "report": report }))?;
            Ok(())
        }
        Command::Ank { n_symbols, gaps, n, k } => {
            let gaps = parse_gaps(gaps)?;
            let table = symdyn::decomp::ank_table(&gaps, *n_symbols, *n, *k)?;
            out.emit(
                "ank",
                json!({ "gaps": gaps.to_string(), "N": n_symbols, "holds": table.holds(), "table": table }),
            )?;
            Ok(())
        }
    }
}

fn entropy<W: Write>(
    out: Out<W>,
    shift: &ShiftArgs,
    method: EntropyMethod,
    n: usize,
    tol: f64,
    max_states: usize,
) -> Run {
    let (spec, lang) = load_shift(shift)?;
    match method {
        EntropyMethod::Growth => {
            let est = growth_entropy(&lang, n)?;
            out.emit("entropy", json!({ "shift": spec.to_string(), "estimate": est, "value": est.value }))?;
        }
        EntropyMethod::Perron => {
            let est = automaton_entropy(&lang, max_states)?;
            out.emit("entropy", json!({ "shift": spec.to_string(), "estimate": est, "value": est.value }))?;
        }
        EntropyMethod::Root => {
            let (gaps, symbols) = match &spec {
                ShiftSpec::Sgap(g) => (g.clone(), 2),
                ShiftSpec::FatSgap { n, gaps } => (gaps.clone(), *n),
                other => return Err(usage(format!("the root method needs an sgap or fatsgap shift, got {other}"))),
            };
            let root = gap_entropy_root(&gaps, symbols, tol)?;
            out.emit(
                "entropy",
                json!({ "shift": spec.to_string(), "value": root.estimate.value, "estimate": root.estimate,
                        "x_lo": root.x_lo, "x_hi": root.x_hi, "f1_at_root": root.f1_at_root, "iterations": root.iterations }),
            )?;
        }
    }
    Ok(())
}

fn with_decomposition(args: &DecompositionArgs, f: impl FnOnce(&dyn Decomposition) -> Run) -> Run {
    match args.kind {
        DecompositionKind::Natural | DecompositionKind::Filler => {
            let shift = args.shift.clone().ok_or_else(|| usage("--shift is required for this decomposition"))?;
            let (_, lang) = load_shift(&ShiftArgs { shift, horizon: args.horizon })?;
            if args.kind == DecompositionKind::Natural {
                let d = natural_coded_decomposition(lang.as_ref())
                    .map_err(|_| usage("the natural decomposition needs a coded shift"))?;
                f(&d)
            } else {
                f(&filler_decomposition(lang.as_ref()))
            }
        }
        DecompositionKind::Hofbauer => {
            let text = args.map.as_deref().ok_or_else(|| usage("--map is required for the hofbauer decomposition"))?;
            let spec = load_map(text)?;
            if spec.is_rational() {
                let map = spec.build_exact().map_err(|e| usage(format!("map: {e}")))?;
                diagram_source(&map, args.depth, args.cut, f)
            } else {
                let map = spec.build_float().map_err(|e| usage(format!("map: {e}")))?;
                diagram_source(&map, args.depth, args.cut, f)
            }
        }
    }
}

fn diagram_source<S: Scalar>(
    map: &PiecewiseMonotoneMap<S>,
    depth: usize,
    cut: usize,
    f: impl FnOnce(&dyn Decomposition) -> Run,
) -> Run {
    let diagram = build_diagram(map, depth)?;
    let component = diagram.closed_component()?;
    let d = diagram_decomposition(&diagram, &component, cut).map_err(|e| usage(e.to_string()))?;
    f(&d)
}

fn decompose<W: Write>(out: Out<W>, d: &dyn Decomposition, n: usize) -> Run {
    let n = n.min(d.horizon());
    let profile = |c: &dyn symdyn::lang::WordAutomaton| -> Vec<String> {
        accepted_profile(c, n).iter().map(|x| x.to_string()).collect()
    };
    let bound = obstruction_upper_bound(d, n)?;
    out.emit(
        "decomposition",
        json!({
            "decomposition": d.describe(),
            "n": n,
            "language": profile(d.language()),
            "prefixes": profile(d.prefixes().as_ref()),
            "cores": profile(d.cores().as_ref()),
            "suffixes": profile(d.suffixes().as_ref()),
            "obstruction_bound": bound,
        }),
    )?;
    Ok(())
}

fn hofbauer<W: Write, S: Scalar>(
    out: Out<W>,
    map: &PiecewiseMonotoneMap<S>,
    depth: usize,
    export: Option<&Path>,
    arithmetic: &str,
) -> Run {
    let d = build_diagram(map, depth)?;
    let entropy = perron_entropy(&d.graph()).ok();
    let component = d.closed_component().ok();
    if let Some(dir) = export {
        let (edges, vertices) = d.export();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("edges.txt"), edges)?;
        std::fs::write(dir.join("vertices.txt"), vertices)?;
    }
    out.emit(
        "hofbauer",
        json!({
            "map": map.describe(),
            "arithmetic": arithmetic,
            "complete": d.complete(),
            "depth": d.depth(),
            "steps": d.steps(),
            "vertices": d.vertices().len(),
            "edges": d.edges().len(),
            "level_sizes": d.level_sizes(),
            "leaks": d.leaks().iter().filter(|&&l| l).count(),
            "perron_entropy": entropy.map(|e| e.value),
            "closed_component": component,
        }),
    )?;
    Ok(())
}

fn maximize<W: Write>(out: Out<W>, args: &PotentialArgs, float: bool) -> Run {
    let (spec, lang) = load_shift(&args.shift)?;
    let exact = match (&args.pot, float) {
        (_, true) => None,
        (None, false) => Some(load_potential::<Rational>(lang.as_ref(), None, parse_rational)?),
        (Some(p), false) => {
            let text = read_file(p)?;
            let all_rational = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .all(|l| l.split_whitespace().last().is_some_and(|v| parse_rational(v).is_some()));
            if all_rational {
                Some(load_potential::<Rational>(lang.as_ref(), Some(p), parse_rational)?)
            } else {
                None
            }
        }
    };
    match exact {
        Some(pot) => {
            let (blocks, note) = block_graph(&spec, lang.as_ref(), &pot, args.block)?;
            let m = max_ergodic_average(&blocks, &pot)?;
            out.emit(
                "maximum",
                json!({
                    "shift": spec.to_string(),
                    "note": note,
                    "arithmetic": "exact",
                    "value": m.value.to_f64_lossy(),
                    "value_exact": m.value.to_string(),
                    "period": m.cycle.period(),
                    "cycle_edges": m.cycle.cycle,
                    "cycle_words": m.cycle.words,
                    "tight_edges": m.tight_edges.len(),
                    "measure": m.cycle.measure.summary(),
                }),
            )?;
        }
        None => {
            let pot = load_potential(lang.as_ref(), args.pot.as_deref(), parse_float)?;
            let (blocks, note) = block_graph(&spec, lang.as_ref(), &pot, args.block)?;
            let m = max_ergodic_average(&blocks, &pot)?;
            out.emit(
                "maximum",
                json!({
                    "shift": spec.to_string(),
                    "note": note,
                    "arithmetic": "float",
                    "value": m.value,
                    "period": m.cycle.period(),
                    "cycle_edges": m.cycle.cycle,
                    "cycle_words": m.cycle.words,
                    "tight_edges": m.tight_edges.len(),
                    "measure": m.cycle.measure.summary(),
                }),
            )?;
        }
    }
    Ok(())
}
