//! Filtered chain complexes given by a quasi-minimal set of generators and
//! their total boundary matrix.
//!
//! Entry `(i, j)` of the matrix is the coefficient of generator `i` in the
//! boundary of generator `j`: rows are faces, columns are cofaces. The matrix
//! is kept in both row-major and column-major form because the decomposer
//! alternates between scanning rows and columns.
//!
//! Deleted generators are tombstoned rather than removed, so an index means
//! the same generator for the lifetime of a matrix. [`TotalBoundaryMatrix::compact`]
//! returns a renumbered copy when a dense view of the survivors is wanted.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::time::Time;

/// Degree and entrance time of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorLabel {
    pub degree: usize,
    pub entrance: Time,
}

impl GeneratorLabel {
    pub fn new(degree: usize, entrance: Time) -> Self {
        GeneratorLabel { degree, entrance }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub id: String,
    pub label: GeneratorLabel,
    /// `(row index, coefficient)` pairs; coefficients are reduced mod p on build.
    pub boundary: Vec<(usize, i64)>,
}

/// Generators in their total order, each with its boundary column.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FilteredChainComplexInput {
    pub generators: Vec<Generator>,
}

impl FilteredChainComplexInput {
    pub fn new(generators: Vec<Generator>) -> Self {
        FilteredChainComplexInput { generators }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = GeneratorLabel> + '_ {
        self.generators.iter().map(|g| g.label)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    /// Reorders generators so that new position `k` holds old generator
    /// `order[k]`, remapping boundary indices.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let m = self.len();
        let mut new_of_old = vec![usize::MAX; m];
        if order.len() != m {
            return Err(Error::Usage(format!(
                "permutation has {} entries for {m} generators",
                order.len()
            )));
        }
        for (new, &old) in order.iter().enumerate() {
            if old >= m || new_of_old[old] != usize::MAX {
                return Err(Error::Usage("order is not a permutation".into()));
            }
            new_of_old[old] = new;
        }
        let generators = order
            .iter()
            .map(|&old| {
                let g = &self.generators[old];
                Generator {
                    id: g.id.clone(),
                    label: g.label,
                    boundary: g
                        .boundary
                        .iter()
                        .map(|&(r, c)| (*new_of_old.get(r).unwrap_or(&r), c))
                        .collect(),
                }
            })
            .collect();
        Ok(FilteredChainComplexInput { generators })
    }
}

/// Sparse square matrix of the differential over `F_p`, indexed both ways.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalBoundaryMatrix {
    field: FieldSpec,
    ids: Vec<String>,
    labels: Vec<GeneratorLabel>,
    rows: Vec<BTreeMap<usize, u32>>,
    cols: Vec<BTreeMap<usize, u32>>,
    alive: Vec<bool>,
    live: usize,
}

impl TotalBoundaryMatrix {
    /// Validates `input` and builds the matrix.
    ///
    /// Checks index ranges, duplicate and vanishing coefficients, empty
    /// boundaries in degree 0, grading, filtration compatibility and `d*d = 0`.
    pub fn build(input: &FilteredChainComplexInput, field: FieldSpec) -> Result<Self> {
        let m = input.len();
        let mut rows = vec![BTreeMap::new(); m];
        let mut cols = vec![BTreeMap::new(); m];
        let labels: Vec<GeneratorLabel> = input.labels().collect();
        for (j, g) in input.generators.iter().enumerate() {
            if g.label.degree == 0 && !g.boundary.is_empty() {
                return Err(Error::DegreeZeroBoundary { generator: j });
            }
            for &(i, c) in &g.boundary {
                if i >= m {
                    return Err(Error::IndexOutOfRange {
                        row: i,
                        col: j,
                        size: m,
                    });
                }
                let value = field.reduce(c);
                if value == 0 {
                    return Err(Error::ZeroCoefficient { row: i, col: j });
                }
                if labels[i].degree + 1 != labels[j].degree {
                    return Err(Error::Grading { row: i, col: j });
                }
                if labels[i].entrance > labels[j].entrance {
                    return Err(Error::Filtration { row: i, col: j });
                }
                if cols[j].insert(i, value).is_some() {
                    return Err(Error::DuplicateEntry { row: i, col: j });
                }
                rows[i].insert(j, value);
            }
        }
        let matrix = TotalBoundaryMatrix {
            field,
            ids: input.generators.iter().map(|g| g.id.clone()).collect(),
            labels,
            rows,
            cols,
            alive: vec![true; m],
            live: m,
        };
        matrix.check_square_zero()?;
        Ok(matrix)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Number of generators ever present, including deleted ones.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Number of generators not yet deleted.
    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn is_alive(&self, i: usize) -> bool {
        self.alive.get(i).copied().unwrap_or(false)
    }

    pub fn live_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&i| self.alive[i])
    }

    pub fn label(&self, i: usize) -> GeneratorLabel {
        self.labels[i]
    }

    pub fn labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }

    pub fn entrance(&self, i: usize) -> Time {
        self.labels[i].entrance
    }

    pub fn degree(&self, i: usize) -> usize {
        self.labels[i].degree
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows[i].get(&j).copied().unwrap_or(0)
    }

    /// Non-zero entries of row `i` keyed by column.
    pub fn row(&self, i: usize) -> &BTreeMap<usize, u32> {
        &self.rows[i]
    }

    /// Non-zero entries of column `j` keyed by row.
    pub fn col(&self, j: usize) -> &BTreeMap<usize, u32> {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    fn check_index(&self, i: usize, what: &str) -> Result<()> {
        if !self.is_alive(i) {
            return Err(Error::Usage(format!("{what} index {i} is not a live generator")));
        }
        Ok(())
    }

    /// Row `target` += `scalar` * row `source`.
    ///
    /// Only the degrees are checked. Entrance safety (the source entering no
    /// later than the target) is the caller's responsibility.
    pub fn add_scaled_row(&mut self, target: usize, source: usize, scalar: i64) -> Result<()> {
        self.check_index(target, "target")?;
        self.check_index(source, "source")?;
        if target == source {
            return Err(Error::Usage(format!("cannot add row {source} to itself")));
        }
        if self.labels[target].degree != self.labels[source].degree {
            return Err(Error::Usage(format!(
                "rows {target} and {source} have different degrees"
            )));
        }
        let c = self.field.reduce(scalar);
        if c == 0 {
            return Ok(());
        }
        self.add_scaled_row_raw(target, source, c);
        Ok(())
    }

    pub(crate) fn add_scaled_row_raw(&mut self, target: usize, source: usize, c: u32) {
        let f = self.field;
        let src: Vec<(usize, u32)> = self.rows[source].iter().map(|(&h, &v)| (h, v)).collect();
        for (h, v) in src {
            let delta = f.mul_raw(c, v);
            let updated = f.add_raw(self.entry(target, h), delta);
            if updated == 0 {
                self.rows[target].remove(&h);
                self.cols[h].remove(&target);
            } else {
                self.rows[target].insert(h, updated);
                self.cols[h].insert(target, updated);
            }
        }
    }

    fn clear_row(&mut self, i: usize) {
        for (h, _) in std::mem::take(&mut self.rows[i]) {
            self.cols[h].remove(&i);
        }
    }

    fn clear_col(&mut self, j: usize) {
        for (r, _) in std::mem::take(&mut self.cols[j]) {
            self.rows[r].remove(&j);
        }
    }

    fn tombstone(&mut self, i: usize) {
        self.clear_row(i);
        self.clear_col(i);
        self.alive[i] = false;
        self.live -= 1;
    }

    /// Zeroes row `j` while keeping the generator alive.
    pub(crate) fn zero_row(&mut self, j: usize) {
        self.clear_row(j);
    }

    /// Removes the two generators of a split.
    ///
    /// After the row additions of a split, column `j` is supported on row `i`
    /// alone; anything else means the reduction went wrong and is reported
    /// as an internal invariant failure. Whatever remains in row `i`, column
    /// `i` and row `j` is discarded with them.
    pub fn delete_generator_pair(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_index(i, "row")?;
        self.check_index(j, "column")?;
        if i == j {
            return Err(Error::Usage("pair indices must differ".into()));
        }
        if let Some((&k, _)) = self.cols[j].iter().find(|(&k, _)| k != i) {
            return Err(Error::Invariant(format!(
                "column {j} still has entry in row {k} besides row {i}"
            )));
        }
        self.tombstone(i);
        self.tombstone(j);
        Ok(())
    }

    /// Like [`delete_generator_pair`](Self::delete_generator_pair), but `j`
    /// stays alive with its row zeroed instead of being removed.
    pub(crate) fn delete_pair_keeping_partner(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_index(i, "row")?;
        self.check_index(j, "column")?;
        if let Some((&k, _)) = self.cols[j].iter().find(|(&k, _)| k != i) {
            return Err(Error::Invariant(format!(
                "column {j} still has entry in row {k} besides row {i}"
            )));
        }
        self.tombstone(i);
        self.clear_col(j);
        self.zero_row(j);
        Ok(())
    }

    /// Removes a generator whose row and column are both zero.
    pub fn delete_generator(&mut self, i: usize) -> Result<()> {
        self.check_index(i, "generator")?;
        if !self.rows[i].is_empty() || !self.cols[i].is_empty() {
            return Err(Error::Usage(format!(
                "generator {i} has a non-zero row or column"
            )));
        }
        self.tombstone(i);
        Ok(())
    }

    /// Σ_n (-1)^n · #(live generators of degree n).
    pub fn euler_characteristic(&self) -> i64 {
        self.live_indices()
            .map(|i| if self.labels[i].degree.is_multiple_of(2) { 1 } else { -1 })
            .sum()
    }

    /// Checks `d*d = 0` column by column.
    pub fn check_square_zero(&self) -> Result<()> {
        let f = self.field;
        for j in 0..self.size() {
            let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
            for (&r, &c) in &self.cols[j] {
                for (&k, &v) in &self.cols[r] {
                    let e = acc.entry(k).or_insert(0);
                    *e = f.add_raw(*e, f.mul_raw(c, v));
                }
            }
            if let Some((&row, _)) = acc.iter().find(|(_, &v)| v != 0) {
                return Err(Error::SquareNonZero { row, col: j });
            }
        }
        Ok(())
    }

    /// True when the row-major and column-major stores hold the same entries
    /// and deleted generators hold none.
    pub fn indexes_agree(&self) -> bool {
        let by_cols: usize = self.cols.iter().map(BTreeMap::len).sum();
        let by_rows: usize = self.rows.iter().map(BTreeMap::len).sum();
        by_cols == by_rows
            && self.cols.iter().enumerate().all(|(j, col)| {
                col.iter()
                    .all(|(&i, &v)| v != 0 && self.rows[i].get(&j) == Some(&v))
            })
            && (0..self.size())
                .filter(|&i| !self.alive[i])
                .all(|i| self.rows[i].is_empty() && self.cols[i].is_empty())
    }

    /// Re-runs every structural check on the live part of the matrix.
    pub fn validate(&self) -> Result<()> {
        if !self.indexes_agree() {
            return Err(Error::Invariant("row and column indexes disagree".into()));
        }
        for (j, col) in self.cols.iter().enumerate() {
            for &i in col.keys() {
                if self.labels[i].degree + 1 != self.labels[j].degree {
                    return Err(Error::Grading { row: i, col: j });
                }
                if self.labels[i].entrance > self.labels[j].entrance {
                    return Err(Error::Filtration { row: i, col: j });
                }
            }
        }
        self.check_square_zero()
    }

    /// Copy containing only live generators, renumbered in index order, with
    /// the map from new to old indices.
    pub fn compact(&self) -> (TotalBoundaryMatrix, Vec<usize>) {
        let old: Vec<usize> = self.live_indices().collect();
        let mut new_of_old = vec![usize::MAX; self.size()];
        for (n, &o) in old.iter().enumerate() {
            new_of_old[o] = n;
        }
        let remap = |map: &BTreeMap<usize, u32>| -> BTreeMap<usize, u32> {
            map.iter().map(|(&k, &v)| (new_of_old[k], v)).collect()
        };
        let matrix = TotalBoundaryMatrix {
            field: self.field,
            ids: old.iter().map(|&o| self.ids[o].clone()).collect(),
            labels: old.iter().map(|&o| self.labels[o]).collect(),
            rows: old.iter().map(|&o| remap(&self.rows[o])).collect(),
            cols: old.iter().map(|&o| remap(&self.cols[o])).collect(),
            alive: vec![true; old.len()],
            live: old.len(),
        };
        (matrix, old)
    }

    /// Dense block with the given row and column indices.
    pub fn dense_block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<u32>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.entry(i, j)).collect())
            .collect()
    }

    /// Live generators of one degree in index order.
    pub fn live_of_degree(&self, degree: usize) -> Vec<usize> {
        self.live_indices()
            .filter(|&i| self.labels[i].degree == degree)
            .collect()
    }

    /// Live generators and their current columns, as builder input.
    pub fn to_input(&self) -> FilteredChainComplexInput {
        let (compact, _) = self.compact();
        let generators = (0..compact.size())
            .map(|j| Generator {
                id: compact.ids[j].clone(),
                label: compact.labels[j],
                boundary: compact.cols[j].iter().map(|(&i, &v)| (i, v as i64)).collect(),
            })
            .collect();
        FilteredChainComplexInput { generators }
    }
}

/// Writes live generators in the boundary-matrix text format.
pub fn write_boundary_text(matrix: &TotalBoundaryMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", matrix.field().characteristic());
    for j in matrix.live_indices() {
        let label = matrix.label(j);
        let _ = write!(out, "{} {} {}", matrix.id(j), label.degree, label.entrance);
        for (&i, &v) in matrix.col(j) {
            let _ = write!(out, " {}:{}", matrix.id(i), v);
        }
        out.push('\n');
    }
    out
}

fn token_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..pos]));
            }
        } else if start.is_none() {
            start = Some(pos);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (s + 1, t)).collect()
}

/// Line, column, row id and coefficient of one `row:value` token.
type EntryToken = (usize, usize, String, i64);

/// Parses the boundary-matrix text format.
///
/// ```text
/// # comment
/// field 2
/// x 0 0
/// y 0 0
/// xy 1 1 x:1 y:1
/// ```
///
/// Row ids may refer to generators defined later in the file.
pub fn parse_boundary_text(text: &str) -> Result<(FieldSpec, FilteredChainComplexInput)> {
    let mut field: Option<FieldSpec> = None;
    let mut records: Vec<(usize, String, GeneratorLabel, Vec<EntryToken>)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = token_columns(content);
        if tokens.is_empty() {
            continue;
        }
        if tokens[0].1 == "field" {
            if field.is_some() {
                return Err(Error::parse(line_no, tokens[0].0, "duplicate field header"));
            }
            let (col, tok) = *tokens
                .get(1)
                .ok_or_else(|| Error::parse(line_no, tokens[0].0, "missing field modulus"))?;
            let p: u64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, col, format!("invalid modulus `{tok}`")))?;
            if tokens.len() > 2 {
                return Err(Error::parse(line_no, tokens[2].0, "unexpected token after modulus"));
            }
            field = Some(FieldSpec::new(p)?);
            continue;
        }
        if field.is_none() {
            return Err(Error::parse(line_no, tokens[0].0, "expected `field <p>` header first"));
        }
        if tokens.len() < 3 {
            return Err(Error::parse(
                line_no,
                tokens[0].0,
                "expected `id degree entrance [row_id:coeff ...]`",
            ));
        }
        let (id_col, id) = tokens[0];
        if id.contains(':') {
            return Err(Error::parse(line_no, id_col, "generator id may not contain `:`"));
        }
        let (dcol, dtok) = tokens[1];
        let degree: usize = dtok
            .parse()
            .map_err(|_| Error::parse(line_no, dcol, format!("invalid degree `{dtok}`")))?;
        let (ecol, etok) = tokens[2];
        let entrance = etok
            .parse::<f64>()
            .ok()
            .and_then(Time::new)
            .ok_or_else(|| Error::parse(line_no, ecol, format!("invalid entrance time `{etok}`")))?;
        let mut entries = Vec::new();
        for &(col, tok) in &tokens[3..] {
            let (rid, coeff) = tok
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(line_no, col, format!("expected `row_id:coeff`, got `{tok}`")))?;
            let c: i64 = coeff
                .parse()
                .map_err(|_| Error::parse(line_no, col, format!("invalid coefficient `{coeff}`")))?;
            entries.push((line_no, col, rid.to_string(), c));
        }
        if index.insert(id.to_string(), records.len()).is_some() {
            return Err(Error::parse(line_no, id_col, format!("duplicate generator id `{id}`")));
        }
        records.push((line_no, id.to_string(), GeneratorLabel::new(degree, entrance), entries));
    }
    let field = field.ok_or_else(|| Error::parse(1, 1, "empty input: missing `field <p>` header"))?;
    let mut generators = Vec::with_capacity(records.len());
    for (_, id, label, entries) in records {
        let mut boundary = Vec::with_capacity(entries.len());
        for (line, col, rid, c) in entries {
            let row = *index
                .get(&rid)
                .ok_or_else(|| Error::parse(line, col, format!("unknown generator id `{rid}`")))?;
            boundary.push((row, c));
        }
        generators.push(Generator { id, label, boundary });
    }
    Ok((field, FilteredChainComplexInput { generators }))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn t(v: f64) -> Time {
        Time::new(v).unwrap()
    }

    pub(crate) fn gen(id: &str, degree: usize, ent: f64, boundary: &[(usize, i64)]) -> Generator {
        Generator {
            id: id.into(),
            label: GeneratorLabel::new(degree, t(ent)),
            boundary: boundary.to_vec(),
        }
    }

    fn f2() -> FieldSpec {
        FieldSpec::default()
    }

    /// Edge `ab` entering at 1 on vertices at 0.
    fn edge() -> FilteredChainComplexInput {
        FilteredChainComplexInput::new(vec![
            gen("a", 0, 0.0, &[]),
            gen("b", 0, 0.0, &[]),
            gen("ab", 1, 1.0, &[(0, 1), (1, 1)]),
        ])
    }

    #[test]
    fn empty_and_single() {
        let d = TotalBoundaryMatrix::build(&FilteredChainComplexInput::default(), f2()).unwrap();
        assert_eq!(d.size(), 0);
        assert_eq!(d.euler_characteristic(), 0);

        let one = FilteredChainComplexInput::new(vec![gen("v", 0, 0.0, &[])]);
        let d = TotalBoundaryMatrix::build(&one, f2()).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.euler_characteristic(), 1);
    }

    #[test]
    fn validation_errors_name_the_entry() {
        let mut bad = edge();
        bad.generators[2].label.entrance = t(-0.0);
        bad.generators[0].label.entrance = t(2.0);
        assert_eq!(
            TotalBoundaryMatrix::build(&bad, f2()),
            Err(Error::Filtration { row: 0, col: 2 })
        );

        let mut bad = edge();
        bad.generators[2].label.degree = 2;
        assert_eq!(
            TotalBoundaryMatrix::build(&bad, f2()),
            Err(Error::Grading { row: 0, col: 2 })
        );

        let mut bad = edge();
        bad.generators[0].boundary.push((1, 1));
        assert_eq!(
            TotalBoundaryMatrix::build(&bad, f2()),
            Err(Error::DegreeZeroBoundary { generator: 0 })
        );

        let mut bad = edge();
        bad.generators[2].boundary.push((7, 1));
        assert!(matches!(
            TotalBoundaryMatrix::build(&bad, f2()),
            Err(Error::IndexOutOfRange { row: 7, col: 2, .. })
        ));

        let mut bad = edge();
        bad.generators[2].boundary[1].1 = 2;
        assert_eq!(
            TotalBoundaryMatrix::build(&bad, f2()),
            Err(Error::ZeroCoefficient { row: 1, col: 2 })
        );
    }

    #[test]
    fn detects_nonzero_square() {
        // a triangle whose boundary is a path, not a cycle
        let mut input = edge();
        input.generators.push(gen("c", 0, 0.0, &[]));
        input.generators.push(gen("bc", 1, 1.0, &[(1, 1), (3, 1)]));
        input.generators.push(gen("abc", 2, 2.0, &[(2, 1), (4, 1)]));
        assert_eq!(
            TotalBoundaryMatrix::build(&input, f2()),
            Err(Error::SquareNonZero { row: 0, col: 5 })
        );
    }

    #[test]
    fn row_addition_updates_both_indexes() {
        let input = FilteredChainComplexInput::new(vec![
            gen("a", 0, 0.0, &[]),
            gen("b", 0, 0.0, &[]),
            gen("c", 0, 0.0, &[]),
            gen("ab", 1, 1.0, &[(0, 1), (1, 1)]),
            gen("bc", 1, 1.0, &[(1, 1), (2, 1)]),
        ]);
        let mut d = TotalBoundaryMatrix::build(&input, f2()).unwrap();
        d.add_scaled_row(0, 1, 1).unwrap();
        assert_eq!(d.row(0).keys().copied().collect::<Vec<_>>(), vec![4]);
        assert_eq!(d.col(3).keys().copied().collect::<Vec<_>>(), vec![1]);
        assert!(d.indexes_agree());

        let before = d.clone();
        d.add_scaled_row(0, 1, 0).unwrap();
        assert_eq!(d, before);
        assert!(matches!(d.add_scaled_row(1, 1, 1), Err(Error::Usage(_))));
        assert!(matches!(d.add_scaled_row(0, 3, 1), Err(Error::Usage(_))));
    }

    #[test]
    fn deletions() {
        let mut d = TotalBoundaryMatrix::build(&edge(), f2()).unwrap();
        assert!(matches!(d.delete_generator(0), Err(Error::Usage(_))));
        assert!(matches!(
            d.delete_generator_pair(0, 2),
            Err(Error::Invariant(_))
        ));
        d.add_scaled_row(1, 0, 1).unwrap();
        d.delete_generator_pair(0, 2).unwrap();
        assert_eq!(d.live_count(), 1);
        assert!(d.indexes_agree());
        d.delete_generator(1).unwrap();
        assert_eq!(d.live_count(), 0);
        assert!(matches!(d.delete_generator(1), Err(Error::Usage(_))));

        let pair = FilteredChainComplexInput::new(vec![
            gen("a", 0, 0.0, &[]),
            gen("e", 1, 1.0, &[(0, 1)]),
        ]);
        let mut d = TotalBoundaryMatrix::build(&pair, f2()).unwrap();
        d.delete_generator_pair(0, 1).unwrap();
        assert_eq!(d.live_count(), 0);
        assert_eq!(d.compact().0.size(), 0);
    }

    #[test]
    fn parse_reports_positions() {
        let err = parse_boundary_text("field 2\nx 0 0\nxy 1 1 x:1 q:1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                column: 12,
                message: "unknown generator id `q`".into()
            }
        );
        let err = parse_boundary_text("x 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 1, .. }));
        let err = parse_boundary_text("").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_boundary_text("field 2\nx 0 -1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 5, .. }));
        assert_eq!(parse_boundary_text("field 6\n").unwrap_err(), Error::NotPrime(6));
    }

    #[test]
    fn text_round_trip() {
        let text = "# an edge, forward reference included\nfield 3\nab 1 1.5 a:1 b:2\na 0 0\nb 0 0.25\n";
        let (field, input) = parse_boundary_text(text).unwrap();
        assert_eq!(field.characteristic(), 3);
        let d = TotalBoundaryMatrix::build(&input, field).unwrap();
        let written = write_boundary_text(&d);
        let (field2, input2) = parse_boundary_text(&written).unwrap();
        let d2 = TotalBoundaryMatrix::build(&input2, field2).unwrap();
        assert_eq!(d, d2);
        assert_eq!(written, write_boundary_text(&d2));
    }
}
