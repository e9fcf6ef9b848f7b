//! Filtered simplicial complexes and the Vietoris-Rips construction.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::complex::{FilteredChainComplexInput, Generator, GeneratorLabel};
use crate::error::{Error, Result};
use crate::time::Time;

/// Symmetric dissimilarity matrix with zero diagonal.
///
/// The triangle inequality is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<Time>,
    labels: Vec<String>,
}

impl DistanceMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDistances(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                let t = Time::new(v).ok_or_else(|| {
                    Error::InvalidDistances(format!(
                        "entry ({i}, {j}) = {v} is negative or not finite"
                    ))
                })?;
                entries.push(t);
            }
        }
        for i in 0..n {
            if entries[i * n + i] != Time::ZERO {
                return Err(Error::InvalidDistances(format!("diagonal entry ({i}, {i}) is not zero")));
            }
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidDistances(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ"
                    )));
                }
            }
        }
        Ok(DistanceMatrix {
            n,
            entries,
            labels: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    /// Builds the full matrix from rows `1..n` of its strict lower triangle.
    pub fn from_lower_triangle(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len() + 1;
        let mut full = vec![vec![0.0; n]; n];
        for (k, row) in rows.iter().enumerate() {
            let i = k + 1;
            if row.len() != i {
                return Err(Error::InvalidDistances(format!(
                    "lower-triangular row {i} has {} entries, expected {i}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                full[i][j] = v;
                full[j][i] = v;
            }
        }
        Self::new(full)
    }

    pub fn from_points(points: &[Vec<f64>], metric: Metric) -> Result<Self> {
        if let Some(first) = points.first() {
            if let Some(k) = points.iter().position(|p| p.len() != first.len()) {
                return Err(Error::InvalidDistances(format!(
                    "point {k} has dimension {}, expected {}",
                    points[k].len(),
                    first.len()
                )));
            }
        }
        let rows = points
            .iter()
            .map(|p| points.iter().map(|q| metric.distance(p, q)).collect())
            .collect();
        Self::new(rows)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidDistances(format!(
                "{} labels for {} points",
                labels.len(),
                self.n
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Time {
        self.entries[i * self.n + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Largest entry; zero for fewer than two points.
    pub fn diameter(&self) -> Time {
        self.entries.iter().copied().max().unwrap_or(Time::ZERO)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    LInf,
}

impl Metric {
    pub fn distance(self, p: &[f64], q: &[f64]) -> f64 {
        let diffs = p.iter().zip(q).map(|(a, b)| (a - b).abs());
        match self {
            Metric::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::LInf => diffs.fold(0.0, f64::max),
        }
    }
}

/// A simplex as a sorted list of distinct vertex indices with its entrance time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub entrance: Time,
}

impl Simplex {
    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Face-closed simplicial complex whose entrance times are monotone along faces.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplicialComplex {
    vertex_names: Vec<String>,
    simplices: Vec<Simplex>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl FilteredSimplicialComplex {
    pub fn new(vertex_names: Vec<String>, simplices: Vec<Simplex>) -> Result<Self> {
        let nv = vertex_names.len();
        let mut lookup = HashMap::with_capacity(simplices.len());
        for (k, s) in simplices.iter().enumerate() {
            if s.vertices.is_empty() {
                return Err(Error::InvalidFiltration(format!("simplex {k} has no vertices")));
            }
            if s.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {k} does not list distinct vertices in increasing order"
                )));
            }
            if let Some(&v) = s.vertices.iter().find(|&&v| v >= nv) {
                return Err(Error::InvalidFiltration(format!("simplex {k} uses unknown vertex {v}")));
            }
            if lookup.insert(s.vertices.clone(), k).is_some() {
                return Err(Error::InvalidFiltration(format!("simplex {k} is listed twice")));
            }
        }
        let complex = FilteredSimplicialComplex {
            vertex_names,
            simplices,
            lookup,
        };
        for (k, s) in complex.simplices.iter().enumerate() {
            if s.vertices.len() < 2 {
                continue;
            }
            for face in facets(&s.vertices) {
                match complex.lookup.get(&face) {
                    None => {
                        return Err(Error::InvalidFiltration(format!(
                            "face {} of simplex {} is missing",
                            complex.name_of(&face),
                            complex.simplex_id(k)
                        )))
                    }
                    Some(&f) if complex.simplices[f].entrance > s.entrance => {
                        return Err(Error::InvalidFiltration(format!(
                            "face {} enters after simplex {}",
                            complex.simplex_id(f),
                            complex.simplex_id(k)
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(complex)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        self.lookup.get(vertices).copied()
    }

    fn name_of(&self, vertices: &[usize]) -> String {
        vertices
            .iter()
            .map(|&v| self.vertex_names[v].as_str())
            .collect::<Vec<_>>()
            .join("-")
    }

    /// Vertex names joined by `-`.
    pub fn simplex_id(&self, k: usize) -> String {
        self.name_of(&self.simplices[k].vertices)
    }

    /// Signed facets `(index, (-1)^k)` of simplex `k`.
    pub fn boundary(&self, k: usize) -> Vec<(usize, i64)> {
        let s = &self.simplices[k];
        if s.vertices.len() < 2 {
            return Vec::new();
        }
        facets(&s.vertices)
            .enumerate()
            .map(|(pos, face)| {
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                (self.lookup[&face], sign)
            })
            .collect()
    }

    /// One generator per simplex, in stored order.
    pub fn chain_complex(&self) -> FilteredChainComplexInput {
        let generators = (0..self.len())
            .map(|k| Generator {
                id: self.simplex_id(k),
                label: GeneratorLabel::new(self.simplices[k].dimension(), self.simplices[k].entrance),
                boundary: self.boundary(k),
            })
            .collect();
        FilteredChainComplexInput { generators }
    }

    /// Writes `v0 v1 ... vk : entrance` lines.
    pub fn to_filtration_text(&self) -> String {
        let mut out = String::new();
        for s in &self.simplices {
            let names: Vec<&str> = s.vertices.iter().map(|&v| self.vertex_names[v].as_str()).collect();
            let _ = writeln!(out, "{} : {}", names.join(" "), s.entrance);
        }
        out
    }

    /// Parses one simplex per line, `v0 v1 ... vk : entrance`.
    ///
    /// Vertices are numbered by first appearance; face closure and entrance
    /// monotonicity are validated.
    pub fn parse_filtration(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut simplices = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let colon = content
                .find(':')
                .ok_or_else(|| Error::parse(line_no, 1, "expected `v0 v1 ... : entrance`"))?;
            let (lhs, rhs) = (&content[..colon], &content[colon + 1..]);
            let ent_tok = rhs.trim();
            let col = colon + 2 + (rhs.len() - rhs.trim_start().len());
            let entrance = ent_tok
                .parse::<f64>()
                .ok()
                .and_then(Time::new)
                .ok_or_else(|| Error::parse(line_no, col, format!("invalid entrance time `{ent_tok}`")))?;
            let mut vertices = Vec::new();
            for tok in lhs.split_whitespace() {
                let next = names.len();
                let v = *index.entry(tok.to_string()).or_insert_with(|| {
                    names.push(tok.to_string());
                    next
                });
                vertices.push(v);
            }
            if vertices.is_empty() {
                return Err(Error::parse(line_no, 1, "simplex has no vertices"));
            }
            vertices.sort_unstable();
            if vertices.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::parse(line_no, 1, "repeated vertex in simplex"));
            }
            simplices.push(Simplex { vertices, entrance });
        }
        if simplices.is_empty() {
            return Err(Error::parse(1, 1, "empty filtration"));
        }
        Self::new(names, simplices)
    }
}

/// Codimension-one faces in the order used for the alternating sign.
fn facets(vertices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..vertices.len()).map(move |skip| {
        vertices
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// Vietoris-Rips complex of all simplices of dimension `<= max_degree` whose
/// diameter is `<= threshold`, listed by dimension and then lexicographically.
pub fn rips_complex(
    distances: &DistanceMatrix,
    max_degree: usize,
    threshold: Option<Time>,
) -> FilteredSimplicialComplex {
    let n = distances.len();
    let mut simplices = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for dim in 0..=max_degree.min(n.saturating_sub(1)) {
        combinations(n, dim + 1, &mut current, 0, &mut |verts| {
            let mut ent = Time::ZERO;
            for (a, &u) in verts.iter().enumerate() {
                for &w in &verts[a + 1..] {
                    ent = ent.max(distances.get(u, w));
                }
            }
            if threshold.is_none_or(|t| ent <= t) {
                simplices.push(Simplex {
                    vertices: verts.to_vec(),
                    entrance: ent,
                });
            }
        });
    }
    FilteredSimplicialComplex::new(distances.labels().to_vec(), simplices)
        .expect("Rips construction is face-closed and monotone")
}

fn combinations(
    n: usize,
    k: usize,
    current: &mut Vec<usize>,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == k {
        visit(current);
        return;
    }
    for v in start..n {
        if n - v < k - current.len() {
            break;
        }
        current.push(v);
        combinations(n, k, current, v + 1, visit);
        current.pop();
    }
}

/// Generators of the Vietoris-Rips filtration with signed simplicial boundaries.
pub fn build_rips(
    distances: &DistanceMatrix,
    max_degree: usize,
    threshold: Option<Time>,
) -> FilteredChainComplexInput {
    rips_complex(distances, max_degree, threshold).chain_complex()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortMode {
    /// Entrance time, then degree: the standard persistence order.
    #[default]
    EntranceThenDegree,
    DegreeThenEntrance,
    AsGiven,
}

/// Stable reordering of generators by `mode`.
pub fn sort_generators(input: &FilteredChainComplexInput, mode: SortMode) -> FilteredChainComplexInput {
    let mut order: Vec<usize> = (0..input.len()).collect();
    let labels: Vec<GeneratorLabel> = input.labels().collect();
    match mode {
        SortMode::EntranceThenDegree => {
            order.sort_by_key(|&k| (labels[k].entrance, labels[k].degree))
        }
        SortMode::DegreeThenEntrance => {
            order.sort_by_key(|&k| (labels[k].degree, labels[k].entrance))
        }
        SortMode::AsGiven => {}
    }
    input.permuted(&order).expect("sorted order is a permutation")
}

fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for piece in content.split(',') {
            for tok in piece.split_whitespace() {
                let offset = piece.find(tok).unwrap_or(0);
                let v: f64 = tok.parse().map_err(|_| {
                    Error::parse(ln + 1, col + offset, format!("invalid number `{tok}`"))
                })?;
                row.push(v);
            }
            col += piece.len() + 1;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Full square distance matrix, comma- or whitespace-separated.
pub fn parse_square_distances(text: &str) -> Result<DistanceMatrix> {
    let rows = parse_rows(text)?;
    if rows.is_empty() {
        return Err(Error::parse(1, 1, "empty distance matrix"));
    }
    DistanceMatrix::new(rows)
}

/// Strict lower triangle, row `k` listing `k` distances. A leading empty row
/// for point 0 may be omitted, since blank lines are skipped.
pub fn parse_lower_distances(text: &str) -> Result<DistanceMatrix> {
    let rows = parse_rows(text)?;
    if rows.is_empty() {
        return Err(Error::parse(1, 1, "empty distance matrix"));
    }
    DistanceMatrix::from_lower_triangle(rows)
}

/// One point per line, coordinates comma- or whitespace-separated.
pub fn parse_points(text: &str, metric: Metric) -> Result<DistanceMatrix> {
    let rows = parse_rows(text)?;
    if rows.is_empty() {
        return Err(Error::parse(1, 1, "empty point cloud"));
    }
    DistanceMatrix::from_points(&rows, metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::TotalBoundaryMatrix;
    use crate::field::FieldSpec;

    fn line() -> DistanceMatrix {
        DistanceMatrix::new(vec![
            vec![0.0, 1.0, 2.0, 3.0],
            vec![1.0, 0.0, 1.0, 2.0],
            vec![2.0, 1.0, 0.0, 1.0],
            vec![3.0, 2.0, 1.0, 0.0],
        ])
        .unwrap()
        .with_labels(["x", "y", "z", "w"].map(String::from).to_vec())
        .unwrap()
    }

    fn grid() -> DistanceMatrix {
        DistanceMatrix::new(
            (0..4)
                .map(|i| (0..4).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
                .collect(),
        )
        .unwrap()
    }

    fn ent(input: &FilteredChainComplexInput, id: &str) -> f64 {
        input.generators[input.index_of(id).unwrap()].label.entrance.value()
    }

    #[test]
    fn line_labels() {
        let input = build_rips(&line(), 3, None);
        assert_eq!(input.len(), 15);
        assert_eq!(ent(&input, "x-z"), 2.0);
        assert_eq!(ent(&input, "x-w"), 3.0);
        assert_eq!(ent(&input, "x-y-z"), 2.0);
        assert_eq!(ent(&input, "x-y-z-w"), 3.0);
        for p in [2, 3, 5] {
            let d = TotalBoundaryMatrix::build(&input, FieldSpec::new(p).unwrap()).unwrap();
            assert_eq!(d.euler_characteristic(), 1);
        }
    }

    #[test]
    fn grid_and_single_point() {
        let input = build_rips(&grid(), 3, None);
        assert!(input
            .generators
            .iter()
            .filter(|g| g.label.degree > 0)
            .all(|g| g.label.entrance.value() == 1.0));
        assert_eq!(input.generators.iter().filter(|g| g.label.degree > 0).count(), 11);

        let one = build_rips(&DistanceMatrix::new(vec![vec![0.0]]).unwrap(), 3, None);
        assert_eq!(one.len(), 1);
        assert!(one.generators[0].boundary.is_empty());
        assert_eq!(one.generators[0].label, GeneratorLabel::new(0, Time::ZERO));
    }

    #[test]
    fn threshold_truncates() {
        let input = build_rips(&line(), 3, Time::new(1.0));
        assert_eq!(input.len(), 7);
    }

    #[test]
    fn counts_are_binomial() {
        for v in 1..=7usize {
            let d = DistanceMatrix::new(
                (0..v)
                    .map(|i| (0..v).map(|j| (i as f64 - j as f64).abs()).collect())
                    .collect(),
            )
            .unwrap();
            let input = build_rips(&d, v, None);
            for n in 0..v {
                let count = input.labels().filter(|l| l.degree == n).count();
                let binom = (0..=n).fold(1usize, |acc, k| acc * (v - k) / (k + 1));
                assert_eq!(count, binom, "v={v}, n={n}");
            }
        }
    }

    #[test]
    fn sorting_modes() {
        let input = build_rips(&line(), 3, None);
        let sorted = sort_generators(&input, SortMode::EntranceThenDegree);
        let ids: Vec<&str> = sorted.generators.iter().map(|g| g.id.as_str()).collect();
        assert_eq!(
            ids,
            vec![
                "x", "y", "z", "w", "x-y", "y-z", "z-w", "x-z", "y-w", "x-y-z", "y-z-w", "x-w",
                "x-y-w", "x-z-w", "x-y-z-w"
            ]
        );
        let d = TotalBoundaryMatrix::build(&sorted, FieldSpec::default()).unwrap();
        assert!(d.validate().is_ok());

        assert_eq!(sort_generators(&input, SortMode::AsGiven), input);

        let g = sort_generators(&build_rips(&grid(), 3, None), SortMode::DegreeThenEntrance);
        let degrees: Vec<usize> = g.labels().map(|l| l.degree).collect();
        assert_eq!(degrees, vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3]);
    }

    #[test]
    fn distance_validation() {
        assert!(matches!(
            DistanceMatrix::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(Error::InvalidDistances(_))
        ));
        assert!(matches!(
            DistanceMatrix::new(vec![vec![-1.0, 1.0], vec![1.0, 0.0]]),
            Err(Error::InvalidDistances(_))
        ));
        assert!(matches!(
            DistanceMatrix::new(vec![vec![1.0, 1.0], vec![1.0, 0.0]]),
            Err(Error::InvalidDistances(_))
        ));
        assert!(matches!(
            DistanceMatrix::new(vec![vec![0.0, 1.0]]),
            Err(Error::InvalidDistances(_))
        ));
    }

    #[test]
    fn text_inputs() {
        let lower = parse_lower_distances("1\n2, 1\n3, 2, 1\n").unwrap();
        let square = parse_square_distances("0,1,2,3\n1,0,1,2\n2,1,0,1\n3,2,1,0\n").unwrap();
        assert_eq!(lower, square);
        let pts = parse_points("0 0\n1 0\n2 0\n3 0\n", Metric::LInf).unwrap();
        assert_eq!(pts, square);
        let e = parse_points("0 0\n3 4\n", Metric::Euclidean).unwrap();
        assert_eq!(e.get(0, 1).value(), 5.0);
        assert!(matches!(parse_square_distances(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_square_distances("0,1\n1,x\n"),
            Err(Error::Parse { line: 2, column: 3, .. })
        ));
    }

    #[test]
    fn filtration_text() {
        let text = "a : 0\nb : 0\na b : 1\n";
        let k = FilteredSimplicialComplex::parse_filtration(text).unwrap();
        assert_eq!(k.len(), 3);
        assert_eq!(k.boundary(2), vec![(1, 1), (0, -1)]);
        let again = FilteredSimplicialComplex::parse_filtration(&k.to_filtration_text()).unwrap();
        assert_eq!(again, k);

        assert!(matches!(
            FilteredSimplicialComplex::parse_filtration("a b : 1\na : 0\n"),
            Err(Error::InvalidFiltration(_))
        ));
        assert!(matches!(
            FilteredSimplicialComplex::parse_filtration("a : 2\nb : 0\na b : 1\n"),
            Err(Error::InvalidFiltration(_))
        ));
        assert!(matches!(
            FilteredSimplicialComplex::parse_filtration("a : x\n"),
            Err(Error::Parse { line: 1, column: 5, .. })
        ));
        assert!(matches!(
            FilteredSimplicialComplex::parse_filtration(""),
            Err(Error::Parse { .. })
        ));
    }
}
