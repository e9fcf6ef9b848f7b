use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use interval_spheres::barcode::{bar_multiset, to_barcode, write_barcode_text, write_svg};
use interval_spheres::complex::parse_boundary_text;
use interval_spheres::decomposition::{decompose_traced, write_decomposition_text, ExitTest, Trace};
use interval_spheres::kernel::{decompose_kernel, parse_map_file};
use interval_spheres::rips::{
    build_rips, parse_lower_distances, parse_points, parse_square_distances, sort_generators, DistanceMatrix,
    SortMode,
};
use interval_spheres::spa::{
    bars_of_pairs, measured_row_iterations, predicted_row_iterations, shuffle_ties, spa_reduce, ReductionStats,
    SpaMode,
};
use interval_spheres::{
    decompose as run_decomposition, Error, ErrorKind, FieldSpec, FilteredChainComplexInput, FilteredSimplicialComplex, Metric, Strategy,
    Time,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::{
    BarcodeArgs, DecomposeArgs, InputArgs, InputFormat, KernelArgs, MetricArg, OrderArg, SpaCheckArgs, StatsArgs,
    StrategyArg,
};

#[derive(Debug)]
pub enum CliError {
    Library(Error),
    Io { path: PathBuf, message: String },
    Mismatch(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Library(err) => match err.kind() {
                ErrorKind::Parse | ErrorKind::Usage => 2,
                ErrorKind::Validation => 3,
                ErrorKind::Internal => 4,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Library(err) => err.fmt(f),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Mismatch(count) => write!(f, "{count} barcode mismatches"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Library(err)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Parse errors get the file name prepended.
fn in_file<T>(path: &Path, result: interval_spheres::Result<T>) -> CliResult<T> {
    result.map_err(|err| match err {
        Error::Parse { line, column, message } => CliError::Library(Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        }),
        other => CliError::Library(other),
    })
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io {
            path: p.to_path_buf(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn field_of(p: Option<u64>) -> CliResult<FieldSpec> {
    Ok(FieldSpec::new(p.unwrap_or(2))?)
}

fn metric_of(m: MetricArg) -> Metric {
    match m {
        MetricArg::Euclidean => Metric::Euclidean,
        MetricArg::Linf => Metric::LInf,
    }
}

fn strategy_of(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::Spa => Strategy::Spa,
        StrategyArg::AsGiven => Strategy::AsGiven,
        StrategyArg::DegreeSweep => Strategy::DegreeSweep,
    }
}

fn sort_mode_of(o: OrderArg) -> SortMode {
    match o {
        OrderArg::EntranceDegree => SortMode::EntranceThenDegree,
        OrderArg::DegreeEntrance => SortMode::DegreeThenEntrance,
        OrderArg::AsGiven => SortMode::AsGiven,
    }
}

struct Loaded {
    field: FieldSpec,
    input: FilteredChainComplexInput,
}

struct Loader {
    format: InputFormat,
    metric: Metric,
    field: Option<u64>,
    max_degree: usize,
    threshold: Option<f64>,
    order: SortMode,
}

impl Loader {
    fn from_args(args: &InputArgs) -> Self {
        Loader {
            format: args.format,
            metric: metric_of(args.metric),
            field: args.field,
            max_degree: args.max_degree,
            threshold: args.threshold,
            order: sort_mode_of(args.order),
        }
    }

    fn load(&self, path: &Path) -> CliResult<Loaded> {
        let text = read(path)?;
        let threshold = match self.threshold {
            None => None,
            Some(v) => Some(Time::new(v).ok_or_else(|| {
                Error::Usage(format!("threshold {v} must be finite and non-negative"))
            })?),
        };
        let rips = |d: DistanceMatrix| build_rips(&d, self.max_degree, threshold);
        let (field, input) = match self.format {
            InputFormat::DistancesSquare => (field_of(self.field)?, rips(in_file(path, parse_square_distances(&text))?)),
            InputFormat::DistancesLower => (field_of(self.field)?, rips(in_file(path, parse_lower_distances(&text))?)),
            InputFormat::Points => (field_of(self.field)?, rips(in_file(path, parse_points(&text, self.metric))?)),
            InputFormat::Filtration => (
                field_of(self.field)?,
                in_file(path, FilteredSimplicialComplex::parse_filtration(&text))?.chain_complex(),
            ),
            InputFormat::Boundary => {
                let (field, input) = in_file(path, parse_boundary_text(&text))?;
                if let Some(p) = self.field {
                    if p != u64::from(field.characteristic()) {
                        return Err(Error::Usage(format!(
                            "--field {p} conflicts with `field {}` in {}",
                            field.characteristic(),
                            path.display()
                        ))
                        .into());
                    }
                }
                (field, input)
            }
        };
        Ok(Loaded {
            field,
            input: sort_generators(&input, self.order),
        })
    }
}

/// Runs `job` on every input, in parallel when asked, and joins the outputs in
/// input order. Several inputs get a `# input:` header each.
fn batch(
    inputs: &[PathBuf],
    jobs: usize,
    job: impl Fn(&Path) -> CliResult<String> + Sync,
) -> CliResult<String> {
    let results: Vec<CliResult<String>> = if jobs > 1 && inputs.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {jobs} workers: {e}")))?;
        pool.install(|| inputs.par_iter().map(|p| job(p)).collect())
    } else {
        inputs.iter().map(|p| job(p)).collect()
    };
    let several = inputs.len() > 1;
    let mut out = String::new();
    for (path, result) in inputs.iter().zip(results) {
        let text = result?;
        if several {
            let _ = writeln!(out, "# input: {}", path.display());
        }
        out.push_str(&text);
    }
    Ok(out)
}

fn trace_lines(trace: &Trace, ids: &[String]) -> String {
    let mut out = String::new();
    let names = |v: &[usize]| v.iter().map(|&k| ids[k].as_str()).collect::<Vec<_>>().join(",");
    for (k, step) in trace.steps.iter().enumerate() {
        let exit = match step.pair.exit {
            ExitTest::Row => "row",
            ExitTest::Column => "column",
        };
        let _ = writeln!(
            out,
            "# split {k}: start={} rows={} cols={} updates={} exit={exit} pair={}/{} row_ops={} sphere={}",
            ids[step.pair.start_row],
            names(&step.pair.rows),
            names(&step.pair.cols),
            step.pair.updates,
            ids[step.split.pair.row],
            ids[step.split.pair.col],
            step.split.row_ops.len(),
            step.split.sphere,
        );
    }
    out
}

pub fn decompose(args: &DecomposeArgs) -> CliResult<()> {
    let loader = Loader::from_args(&args.input);
    let strategy = strategy_of(args.strategy);
    let text = batch(&args.input.inputs, args.input.jobs, |path| {
        let loaded = loader.load(path)?;
        let dec = if args.trace {
            decompose_traced(&loaded.input, loaded.field, strategy)?
        } else {
            run_decomposition(&loaded.input, loaded.field, strategy)?
        };
        let mut out = String::new();
        if let Some(trace) = &dec.trace {
            out.push_str(&trace_lines(trace, &dec.ids));
        }
        out.push_str(&write_decomposition_text(&dec));
        Ok(out)
    })?;
    write_output(args.output.as_deref(), &text)
}

pub fn barcode(args: &BarcodeArgs) -> CliResult<()> {
    if args.input.inputs.len() > 1 && (args.plot.is_some() || args.decomposition.is_some()) {
        return Err(Error::Usage("--plot and --decomposition take a single input".into()).into());
    }
    let loader = Loader::from_args(&args.input);
    let strategy = strategy_of(args.strategy);
    let text = batch(&args.input.inputs, args.input.jobs, |path| {
        let loaded = loader.load(path)?;
        let dec = run_decomposition(&loaded.input, loaded.field, strategy)?;
        let diagram = to_barcode(&dec);
        if let Some(p) = &args.decomposition {
            write_output(Some(p), &write_decomposition_text(&dec))?;
        }
        if let Some(p) = &args.plot {
            write_output(Some(p), &write_svg(&diagram))?;
        }
        Ok(write_barcode_text(&diagram, args.include_zero_length))
    })?;
    write_output(args.output.as_deref(), &text)
}

pub fn kernel(args: &KernelArgs) -> CliResult<()> {
    let source = in_file(&args.source, FilteredSimplicialComplex::parse_filtration(&read(&args.source)?))?;
    let target = in_file(&args.target, FilteredSimplicialComplex::parse_filtration(&read(&args.target)?))?;
    let map = in_file(&args.map, parse_map_file(&read(&args.map)?, &source, &target))?;
    let dec = decompose_kernel(&source, &target, &map, field_of(args.field)?, strategy_of(args.strategy))?;
    write_output(args.output.as_deref(), &write_decomposition_text(&dec))
}

/// Diff report between the decomposition barcode and the three reduction
/// modes; empty when all agree.
fn compare(input: &FilteredChainComplexInput, field: FieldSpec, tie_seed: Option<u64>) -> CliResult<Vec<String>> {
    let dec = run_decomposition(input, field, Strategy::Spa)?;
    let ours = to_barcode(&dec).bar_multiset();
    let mut sorted = sort_generators(input, SortMode::EntranceThenDegree);
    if let Some(seed) = tie_seed {
        sorted = shuffle_ties(&sorted, seed);
    }
    let by_degree = sort_generators(&sorted, SortMode::DegreeThenEntrance);
    let mut diffs = Vec::new();
    for (mode, ordered) in [(SpaMode::Plain, &sorted), (SpaMode::Clear, &sorted), (SpaMode::Compress, &by_degree)] {
        let r = spa_reduce(ordered, field, mode)?;
        let theirs = bar_multiset(&bars_of_pairs(ordered, &r.pairs));
        if theirs != ours {
            let only_ours: Vec<String> = ours
                .iter()
                .filter(|(b, c)| theirs.get(b) != Some(c))
                .map(|(b, c)| format!("{c}x({b})"))
                .collect();
            let only_theirs: Vec<String> = theirs
                .iter()
                .filter(|(b, c)| ours.get(b) != Some(c))
                .map(|(b, c)| format!("{c}x({b})"))
                .collect();
            diffs.push(format!(
                "{mode:?}: decomposition [{}] vs reduction [{}]",
                only_ours.join(", "),
                only_theirs.join(", ")
            ));
        }
    }
    Ok(diffs)
}

#[allow(clippy::needless_range_loop)]
fn random_instance(seed: u64, max_degree: usize) -> (FilteredChainComplexInput, FieldSpec) {
    let mut rng = StdRng::seed_from_u64(seed);
    let v = rng.gen_range(1..=8);
    let continuous = rng.gen_bool(0.5);
    let mut rows = vec![vec![0.0; v]; v];
    for a in 0..v {
        for b in a + 1..v {
            let d = if continuous {
                rng.gen_range(0.01..10.0)
            } else {
                f64::from(rng.gen_range(1..=3))
            };
            rows[a][b] = d;
            rows[b][a] = d;
        }
    }
    let p = [2, 3, 5][rng.gen_range(0..3)];
    let distances = DistanceMatrix::new(rows).expect("symmetric with zero diagonal");
    (
        build_rips(&distances, rng.gen_range(0..=max_degree), None),
        FieldSpec::new(p).expect("small prime"),
    )
}

pub fn spa_check(args: &SpaCheckArgs) -> CliResult<()> {
    let mut report = String::new();
    let mut mismatches = 0;
    let mut record = |label: String, diffs: Vec<String>, report: &mut String| {
        if diffs.is_empty() {
            let _ = writeln!(report, "{label}: identical");
        } else {
            mismatches += 1;
            for d in diffs {
                let _ = writeln!(report, "{label}: MISMATCH {d}");
            }
        }
    };
    match (args.random, args.inputs.is_empty()) {
        (Some(count), true) => {
            let first = args.seed.unwrap_or(0);
            let seeds: Vec<u64> = (first..first + count as u64).collect();
            let run = |&seed: &u64| -> CliResult<Vec<String>> {
                let (input, field) = random_instance(seed, args.max_degree.min(3));
                compare(&input, args.field.map_or(Ok(field), |p| field_of(Some(p)))?, None)
            };
            let results: Vec<CliResult<Vec<String>>> = if args.jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(args.jobs)
                    .build()
                    .map_err(|e| Error::Usage(format!("cannot start {} workers: {e}", args.jobs)))?;
                pool.install(|| seeds.par_iter().map(run).collect())
            } else {
                seeds.iter().map(run).collect()
            };
            for (seed, result) in seeds.iter().zip(results) {
                record(format!("seed {seed}"), result?, &mut report);
            }
        }
        (None, false) => {
            let loader = Loader {
                format: args.format,
                metric: metric_of(args.metric),
                field: args.field,
                max_degree: args.max_degree,
                threshold: args.threshold,
                order: SortMode::AsGiven,
            };
            for path in &args.inputs {
                let loaded = loader.load(path)?;
                let diffs = compare(&loaded.input, loaded.field, args.seed)?;
                record(path.display().to_string(), diffs, &mut report);
            }
        }
        _ => {
            return Err(Error::Usage("pass input files or --random N, not both".into()).into());
        }
    }
    write_output(args.output.as_deref(), &report)?;
    if mismatches > 0 {
        return Err(CliError::Mismatch(mismatches));
    }
    Ok(())
}

fn stats_block(prefix: &str, stats: &ReductionStats, out: &mut String) {
    let _ = writeln!(out, "{prefix}.rows_processed={}", stats.rows_processed);
    let _ = writeln!(out, "{prefix}.column_additions={}", stats.column_additions);
    let _ = writeln!(out, "{prefix}.cleared={}", stats.cleared);
    let _ = writeln!(out, "{prefix}.compressed={}", stats.compressed);
}

pub fn stats(args: &StatsArgs) -> CliResult<()> {
    let loader = Loader::from_args(&args.input);
    let text = batch(&args.input.inputs, args.input.jobs, |path| {
        let loaded = loader.load(path)?;
        let (input, field) = (&loaded.input, loaded.field);
        let vertices = input.labels().filter(|l| l.degree == 0).count();
        let top = input.labels().map(|l| l.degree).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "generators={}", input.len());
        let _ = writeln!(out, "vertices={vertices}");
        let _ = writeln!(out, "max_degree={top}");

        let sorted = sort_generators(input, SortMode::EntranceThenDegree);
        let by_degree = sort_generators(input, SortMode::DegreeThenEntrance);
        for (name, mode, ordered) in [
            ("spa.plain", SpaMode::Plain, &sorted),
            ("spa.clear", SpaMode::Clear, &sorted),
            ("spa.compress", SpaMode::Compress, &by_degree),
        ] {
            stats_block(name, &spa_reduce(ordered, field, mode)?.stats, &mut out);
        }
        for (name, compress) in [("no_compress", false), ("compress", true)] {
            let _ = writeln!(
                out,
                "predicted_row_iterations.{name}={}",
                predicted_row_iterations(vertices, top, compress)
            );
            let _ = writeln!(
                out,
                "measured_row_iterations.{name}={}",
                measured_row_iterations(input, field, compress)?
            );
        }
        let counts = decompose_traced(&sorted, field, Strategy::Spa)?.pair_counts()?;
        let _ = writeln!(out, "apparent_pairs={}", counts.apparent);
        let _ = writeln!(out, "emergent_facet_pairs={}", counts.emergent_facet);
        let _ = writeln!(out, "emergent_cofacet_pairs={}", counts.emergent_cofacet);
        Ok(out)
    })?;
    write_output(args.output.as_deref(), &text)
}
