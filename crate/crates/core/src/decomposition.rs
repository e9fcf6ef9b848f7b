//! Decomposition of a filtered chain complex into interval spheres.
//!
//! The driver repeatedly picks a non-zero row, runs [`pair`] to find a pair of
//! generators satisfying the split conditions, and [`split`]s it off by row
//! additions followed by deletion of both generators. When no non-zero row is
//! left, every surviving generator is an infinite sphere.
//!
//! Split conditions for a pair `(i, j)`:
//!
//! 1. `d[i][j] != 0`;
//! 2. `i` has the latest entrance among the non-zero rows of column `j`;
//! 3. `j` has the earliest entrance among the non-zero columns of row `i`.
//!
//! Ties are allowed in 2 and 3. When [`pair`] has to pick among tied
//! candidates it takes the smallest index.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::complex::{FilteredChainComplexInput, TotalBoundaryMatrix};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::time::{Death, Time};

/// `I^n[s, e]`: an `n`-sphere entering at `s` and capped by an `(n+1)`-disk at
/// `e`, or never when `e` is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalSphere {
    pub dimension: usize,
    pub birth: Time,
    pub death: Death,
}

impl IntervalSphere {
    pub fn finite(dimension: usize, birth: Time, death: Time) -> Self {
        IntervalSphere {
            dimension,
            birth,
            death: Death::At(death),
        }
    }

    pub fn infinite(dimension: usize, birth: Time) -> Self {
        IntervalSphere {
            dimension,
            birth,
            death: Death::Never,
        }
    }

    pub fn is_zero_length(&self) -> bool {
        self.death == Death::At(self.birth)
    }
}

impl fmt::Display for IntervalSphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.death {
            Death::At(e) => write!(f, "I^{}[{}, {}]", self.dimension, self.birth, e),
            Death::Never => write!(f, "I^{}[{}, inf)", self.dimension, self.birth),
        }
    }
}

/// Row `row` and column `col` of a pair satisfying the split conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitPair {
    pub row: usize,
    pub col: usize,
}

/// Order in which the driver looks for the next non-zero row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// By entrance, then degree, then index.
    #[default]
    Spa,
    /// By index.
    AsGiven,
    /// By degree ascending, then entrance and index descending. With this
    /// order every visited row is split off together with its own pair.
    DegreeSweep,
}

impl Strategy {
    fn row_order(self, d: &TotalBoundaryMatrix) -> Vec<usize> {
        let mut order: Vec<usize> = d.live_indices().collect();
        match self {
            Strategy::Spa => order.sort_by_key(|&i| (d.entrance(i), d.degree(i), i)),
            Strategy::AsGiven => {}
            Strategy::DegreeSweep => order.sort_by_key(|&i| {
                (
                    d.degree(i),
                    std::cmp::Reverse(d.entrance(i)),
                    std::cmp::Reverse(i),
                )
            }),
        }
        order
    }
}

/// Which test of the pairing loop returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitTest {
    /// The current row has maximal entrance in the current column.
    Row,
    /// The current column has minimal entrance in the current row.
    Column,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairTrace {
    pub start_row: usize,
    /// Rows held by the loop, starting with `start_row`.
    pub rows: Vec<usize>,
    /// Columns held by the loop, starting with the initial pick.
    pub cols: Vec<usize>,
    /// Number of times the row or the column was replaced.
    pub updates: usize,
    pub exit: ExitTest,
}

fn earliest_in_row(d: &TotalBoundaryMatrix, i: usize) -> Option<(Time, usize)> {
    d.row(i).keys().map(|&h| (d.entrance(h), h)).min()
}

fn latest_in_col(d: &TotalBoundaryMatrix, j: usize) -> Option<(Time, usize)> {
    d.col(j)
        .keys()
        .map(|&h| (d.entrance(h), std::cmp::Reverse(h)))
        .max()
        .map(|(t, h)| (t, h.0))
}

/// Whether `(pair.row, pair.col)` satisfies the three split conditions on `d`.
pub fn satisfies_split_conditions(d: &TotalBoundaryMatrix, pair: SplitPair) -> bool {
    let SplitPair { row: i, col: j } = pair;
    if !d.is_alive(i) || !d.is_alive(j) || d.entry(i, j) == 0 {
        return false;
    }
    let latest = latest_in_col(d, j).map(|(t, _)| t);
    let earliest = earliest_in_row(d, i).map(|(t, _)| t);
    latest == Some(d.entrance(i)) && earliest == Some(d.entrance(j))
}

/// Finds a pair satisfying the split conditions, starting from non-zero row `i`.
pub fn pair(d: &TotalBoundaryMatrix, i: usize) -> Result<SplitPair> {
    pair_traced(d, i).map(|(p, _)| p)
}

/// [`pair`] together with the path the loop took.
pub fn pair_traced(d: &TotalBoundaryMatrix, start: usize) -> Result<(SplitPair, PairTrace)> {
    if !d.is_alive(start) {
        return Err(Error::Usage(format!("row {start} is not a live generator")));
    }
    let (_, mut j) = earliest_in_row(d, start)
        .ok_or_else(|| Error::Usage(format!("row {start} is zero")))?;
    let mut i = start;
    let mut trace = PairTrace {
        start_row: start,
        rows: vec![i],
        cols: vec![j],
        updates: 0,
        exit: ExitTest::Row,
    };
    loop {
        let (latest, top) = latest_in_col(d, j).expect("column holds row i");
        if d.entrance(i) == latest {
            trace.exit = ExitTest::Row;
            return Ok((SplitPair { row: i, col: j }, trace));
        }
        i = top;
        trace.rows.push(i);
        trace.updates += 1;

        let (earliest, left) = earliest_in_row(d, i).expect("row holds column j");
        if d.entrance(j) == earliest {
            trace.exit = ExitTest::Column;
            return Ok((SplitPair { row: i, col: j }, trace));
        }
        j = left;
        trace.cols.push(j);
        trace.updates += 1;
    }
}

/// Row `target` += `scalar` * row `source`, as performed by a split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowOp {
    pub target: usize,
    pub source: usize,
    pub scalar: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitReport {
    pub pair: SplitPair,
    pub sphere: IntervalSphere,
    pub row_ops: Vec<RowOp>,
    /// Non-zeros left in column `i` once its generator is replaced by the
    /// boundary of `j`; always zero when `d*d = 0`.
    pub residual_col_i: usize,
    /// Non-zeros left in row `j` once the column changes of the split are
    /// applied; always zero when `d*d = 0`.
    pub residual_row_j: usize,
}

fn nonzeros(acc: &BTreeMap<usize, u32>) -> usize {
    acc.values().filter(|&&v| v != 0).count()
}

/// Column `i` under the change of generators `x_i -> d(x_j)`:
/// Σ_r d[r][j] · column r.
fn promoted_column(d: &TotalBoundaryMatrix, j: usize) -> BTreeMap<usize, u32> {
    let f = d.field();
    let mut acc = BTreeMap::new();
    for (&r, &c) in d.col(j) {
        for (&k, &v) in d.col(r) {
            let e = acc.entry(k).or_insert(0);
            *e = f.add_raw(*e, f.mul_raw(c, v));
        }
    }
    acc
}

/// Row `j` after the column changes, up to the unit `d[i][j]`:
/// Σ_r d[i][r] · row r.
fn cleared_row(d: &TotalBoundaryMatrix, i: usize) -> BTreeMap<usize, u32> {
    let f = d.field();
    let mut acc = BTreeMap::new();
    for (&r, &c) in d.row(i) {
        for (&k, &v) in d.row(r) {
            let e = acc.entry(k).or_insert(0);
            *e = f.add_raw(*e, f.mul_raw(c, v));
        }
    }
    acc
}

/// Splits off the interval sphere of `pair`, deleting both generators.
pub fn split(d: &mut TotalBoundaryMatrix, pair: SplitPair) -> Result<SplitReport> {
    split_with(d, pair, true)
}

fn split_with(d: &mut TotalBoundaryMatrix, pair: SplitPair, compress: bool) -> Result<SplitReport> {
    let SplitPair { row: i, col: j } = pair;
    if !satisfies_split_conditions(d, pair) {
        return Err(Error::Usage(format!(
            "pair ({i}, {j}) does not satisfy the split conditions"
        )));
    }
    let f = d.field();
    let residual_col_i = nonzeros(&promoted_column(d, j));
    let residual_row_j = nonzeros(&cleared_row(d, i));
    if residual_col_i != 0 || residual_row_j != 0 {
        return Err(Error::Invariant(format!(
            "forced-zero column {i} / row {j} of split ({i}, {j}) has {residual_col_i} / {residual_row_j} non-zeros"
        )));
    }
    let pivot_inv = f.inv_raw(d.entry(i, j))?;
    let targets: Vec<(usize, u32)> = d
        .col(j)
        .iter()
        .filter(|(&k, _)| k != i)
        .map(|(&k, &v)| (k, v))
        .collect();
    let mut row_ops = Vec::with_capacity(targets.len());
    for (k, dkj) in targets {
        let scalar = f.neg_raw(f.mul_raw(pivot_inv, dkj));
        d.add_scaled_row_raw(k, i, scalar);
        row_ops.push(RowOp {
            target: k,
            source: i,
            scalar,
        });
    }
    let sphere = IntervalSphere::finite(d.degree(i), d.entrance(i), d.entrance(j));
    if compress {
        d.delete_generator_pair(i, j)?;
    } else {
        d.delete_pair_keeping_partner(i, j)?;
    }
    Ok(SplitReport {
        pair,
        sphere,
        row_ops,
        residual_col_i,
        residual_row_j,
    })
}

/// Splits off the infinite sphere of a generator with zero row and column.
pub fn split_trivial(d: &mut TotalBoundaryMatrix, i: usize) -> Result<IntervalSphere> {
    d.delete_generator(i)?;
    Ok(IntervalSphere::infinite(d.degree(i), d.entrance(i)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub pair: PairTrace,
    pub split: SplitReport,
    /// Splits performed before this one.
    pub splits_before: usize,
    /// Whether the pair already satisfied the split conditions on the
    /// unreduced matrix.
    pub split_conditions_initially: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

/// Counts of pairs split off without any search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    /// Found at the first test and already splittable before any reduction.
    pub apparent: usize,
    /// Found at the second test after one row replacement, after some split.
    pub emergent_facet: usize,
    /// Found at the first test after some split, not splittable initially.
    pub emergent_cofacet: usize,
}

impl Trace {
    pub fn pair_counts(&self) -> PairCounts {
        let mut counts = PairCounts::default();
        for step in &self.steps {
            let p = &step.pair;
            let immediate = p.updates == 0 && p.exit == ExitTest::Row;
            if immediate && step.split_conditions_initially {
                counts.apparent += 1;
            } else if step.splits_before > 0 && !step.split_conditions_initially {
                if immediate {
                    counts.emergent_cofacet += 1;
                } else if p.updates == 1 && p.exit == ExitTest::Column {
                    counts.emergent_facet += 1;
                }
            }
        }
        counts
    }
}

/// Generator indices that make up a sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereGenerators {
    pub i: usize,
    pub j: Option<usize>,
}

/// Interval spheres in the order they were split off, infinite ones last.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub spheres: Vec<IntervalSphere>,
    pub generators: Vec<SphereGenerators>,
    pub ids: Vec<String>,
    pub trace: Option<Trace>,
}

impl Decomposition {
    pub fn multiset(&self) -> BTreeMap<IntervalSphere, usize> {
        let mut out = BTreeMap::new();
        for s in &self.spheres {
            *out.entry(*s).or_insert(0) += 1;
        }
        out
    }

    pub fn finite_count(&self) -> usize {
        self.spheres.iter().filter(|s| s.death.is_finite()).count()
    }

    pub fn infinite_count(&self) -> usize {
        self.spheres.len() - self.finite_count()
    }

    pub fn pair_counts(&self) -> Result<PairCounts> {
        self.trace
            .as_ref()
            .map(Trace::pair_counts)
            .ok_or_else(|| Error::Usage("decomposition was run without a trace".into()))
    }

    pub fn records(&self) -> Vec<SphereRecord> {
        self.spheres
            .iter()
            .zip(&self.generators)
            .map(|(s, g)| SphereRecord {
                sphere: *s,
                gen_i: self.ids[g.i].clone(),
                gen_j: g.j.map(|j| self.ids[j].clone()),
            })
            .collect()
    }
}

/// Apparent and emergent pair counts of a traced run.
pub fn count_emergent_and_apparent(dec: &Decomposition) -> Result<PairCounts> {
    dec.pair_counts()
}

/// Step-wise driver of the decomposition loop.
#[derive(Debug, Clone)]
pub struct Decomposer {
    matrix: TotalBoundaryMatrix,
    order: Vec<usize>,
    cursor: usize,
    counted: Option<usize>,
    rows_visited: usize,
    compress: bool,
    paired: Vec<bool>,
    initial: Option<TotalBoundaryMatrix>,
    trace: Option<Trace>,
    spheres: Vec<IntervalSphere>,
    generators: Vec<SphereGenerators>,
}

impl Decomposer {
    pub fn new(matrix: TotalBoundaryMatrix, strategy: Strategy) -> Self {
        let order = strategy.row_order(&matrix);
        let m = matrix.size();
        Decomposer {
            matrix,
            order,
            cursor: 0,
            counted: None,
            rows_visited: 0,
            compress: true,
            paired: vec![false; m],
            initial: None,
            trace: None,
            spheres: Vec::new(),
            generators: Vec::new(),
        }
    }

    /// Records every pairing search and split.
    pub fn traced(mut self) -> Self {
        self.initial = Some(self.matrix.clone());
        self.trace = Some(Trace::default());
        self
    }

    /// Keeps the column generator of each split as a zero row instead of
    /// deleting it, so the row sweep still has to visit it.
    pub fn without_compress(mut self) -> Self {
        self.compress = false;
        self
    }

    pub fn matrix(&self) -> &TotalBoundaryMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Option<&Trace> {
        self.trace.as_ref()
    }

    /// Rows examined by the sweep so far, each counted once.
    pub fn rows_visited(&self) -> usize {
        self.rows_visited
    }

    /// Performs the next split. Returns `None` once every row is zero.
    pub fn step(&mut self) -> Result<Option<SplitReport>> {
        while self.cursor < self.order.len() {
            let i = self.order[self.cursor];
            if self.counted != Some(self.cursor) {
                self.counted = Some(self.cursor);
                if self.matrix.is_alive(i) {
                    self.rows_visited += 1;
                }
            }
            if !self.matrix.is_alive(i) || self.matrix.row(i).is_empty() {
                // zero rows never become non-zero again
                self.cursor += 1;
                continue;
            }
            let splits_before = self.spheres.len();
            let (pair, pair_trace) = pair_traced(&self.matrix, i)?;
            let report = split_with(&mut self.matrix, pair, self.compress)?;
            self.paired[pair.col] = true;
            self.spheres.push(report.sphere);
            self.generators.push(SphereGenerators {
                i: pair.row,
                j: Some(pair.col),
            });
            if let (Some(trace), Some(initial)) = (self.trace.as_mut(), self.initial.as_ref()) {
                trace.steps.push(TraceStep {
                    pair: pair_trace,
                    split: report.clone(),
                    splits_before,
                    split_conditions_initially: satisfies_split_conditions(initial, pair),
                });
            }
            return Ok(Some(report));
        }
        Ok(None)
    }

    /// Runs the loop to the end and splits off every remaining generator.
    pub fn finish(mut self) -> Result<Decomposition> {
        while self.step()?.is_some() {}
        let remaining: Vec<usize> = self.matrix.live_indices().collect();
        for i in remaining {
            if self.paired[i] {
                self.matrix.delete_generator(i)?;
                continue;
            }
            let sphere = split_trivial(&mut self.matrix, i)?;
            self.spheres.push(sphere);
            self.generators.push(SphereGenerators { i, j: None });
        }
        Ok(Decomposition {
            spheres: self.spheres,
            generators: self.generators,
            ids: self.matrix.ids().to_vec(),
            trace: self.trace,
        })
    }
}

/// Validates `input` and decomposes it.
pub fn decompose(
    input: &FilteredChainComplexInput,
    field: FieldSpec,
    strategy: Strategy,
) -> Result<Decomposition> {
    let matrix = TotalBoundaryMatrix::build(input, field)?;
    Decomposer::new(matrix, strategy).finish()
}

/// [`decompose`] with a full trace of pairing searches and splits.
pub fn decompose_traced(
    input: &FilteredChainComplexInput,
    field: FieldSpec,
    strategy: Strategy,
) -> Result<Decomposition> {
    let matrix = TotalBoundaryMatrix::build(input, field)?;
    Decomposer::new(matrix, strategy).traced().finish()
}

/// One line of the decomposition text format.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRecord {
    pub sphere: IntervalSphere,
    pub gen_i: String,
    pub gen_j: Option<String>,
}

/// `dim birth death gen_i gen_j` per sphere; `inf` and `-` for infinite ones.
pub fn write_decomposition_text(dec: &Decomposition) -> String {
    let mut out = String::new();
    for r in dec.records() {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            r.sphere.dimension,
            r.sphere.birth,
            r.sphere.death,
            r.gen_i,
            r.gen_j.as_deref().unwrap_or("-")
        );
    }
    out
}

pub fn parse_decomposition_text(text: &str) -> Result<Vec<SphereRecord>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(Error::parse(line, 1, "expected `dim birth death gen_i gen_j`"));
        }
        let dimension: usize = toks[0]
            .parse()
            .map_err(|_| Error::parse(line, 1, format!("invalid dimension `{}`", toks[0])))?;
        let birth = toks[1]
            .parse::<f64>()
            .ok()
            .and_then(Time::new)
            .ok_or_else(|| Error::parse(line, 1, format!("invalid birth `{}`", toks[1])))?;
        let death: Death = toks[2].parse().map_err(|m: String| Error::parse(line, 1, m))?;
        if death < Death::At(birth) {
            return Err(Error::parse(line, 1, "death precedes birth"));
        }
        let gen_j = match (death, toks[4]) {
            (Death::Never, "-") => None,
            (Death::Never, _) => {
                return Err(Error::parse(line, 1, "infinite sphere must have `-` as gen_j"))
            }
            (Death::At(_), "-") => {
                return Err(Error::parse(line, 1, "finite sphere needs a gen_j"))
            }
            (Death::At(_), j) => Some(j.to_string()),
        };
        out.push(SphereRecord {
            sphere: IntervalSphere {
                dimension,
                birth,
                death,
            },
            gen_i: toks[3].to_string(),
            gen_j,
        });
    }
    Ok(out)
}
