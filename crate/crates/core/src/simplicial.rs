//! Finite abstract simplicial complexes stored by their facets, together with
//! joins, skeleta, integer chains and boundary matrices.
//!
//! Simplices are strictly increasing vertex-id sequences and are always
//! compared lexicographically. That order fixes the rows and columns of every
//! boundary matrix, so homology and degree computations are reproducible.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index into the vertex table of one complex.
pub type VertexId = usize;

/// A simplex, i.e. a strictly increasing list of vertex ids.
///
/// The empty simplex exists so that reduced chain complexes have a place to
/// put the augmentation; complexes never list it as a facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts `vertices`; a repeated vertex is malformed input.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput(format!(
                "duplicate vertex in simplex {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    /// Canonical simplex spanned by an ordered vertex list, with the sign of
    /// the sorting permutation. `None` if the list repeats a vertex.
    pub fn from_ordered(ordered: &[VertexId]) -> Option<(Self, i32)> {
        let mut v = ordered.to_vec();
        let sign = permutation_sign_by_sorting(&mut v);
        if v.windows(2).any(|w| w[0] == w[1]) {
            None
        } else {
            Some((Simplex(v), sign))
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension, `-1` for the empty simplex.
    pub fn dimension(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    /// Codimension-one faces paired with the position of the omitted vertex.
    pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut face = self.0.clone();
            face.remove(i);
            (i, Simplex(face))
        })
    }

    pub fn map_vertices(&self, f: impl Fn(VertexId) -> VertexId) -> Vec<VertexId> {
        self.0.iter().map(|&v| f(v)).collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sorts in place and returns the sign of the permutation that sorted it.
/// Equal elements are left adjacent; callers check for them.
pub(crate) fn permutation_sign_by_sorting(v: &mut [usize]) -> i32 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// A finite abstract simplicial complex, stored by its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    name: String,
    vertex_count: usize,
    labels: Vec<String>,
    facets: Vec<Simplex>,
}

impl SimplicialComplex {
    /// Builds a complex from an arbitrary facet list: vertices inside a facet
    /// are sorted, duplicates and non-maximal facets are dropped.
    ///
    /// Without labels the vertex count is one more than the largest id used
    /// and labels default to the decimal id. Declared vertices that appear
    /// in no facet become isolated vertices.
    pub fn build(facet_list: &[Vec<VertexId>], vertex_labels: Option<Vec<String>>) -> Result<Self> {
        let mut simplices = Vec::with_capacity(facet_list.len());
        for f in facet_list {
            if f.is_empty() {
                return Err(Error::MalformedInput("empty facet".into()));
            }
            simplices.push(Simplex::new(f.clone())?);
        }
        let max_id = simplices.iter().flat_map(|s| s.0.iter().copied()).max();
        let vertex_count = match &vertex_labels {
            Some(labels) => {
                if let Some(m) = max_id {
                    if m >= labels.len() {
                        return Err(Error::MalformedInput(format!(
                            "vertex id {m} out of range for {} labels",
                            labels.len()
                        )));
                    }
                }
                let unique: HashSet<&String> = labels.iter().collect();
                if unique.len() != labels.len() {
                    return Err(Error::MalformedInput("vertex labels are not unique".into()));
                }
                labels.len()
            }
            None => max_id.map_or(0, |m| m + 1),
        };
        let labels = vertex_labels.unwrap_or_else(|| (0..vertex_count).map(|i| i.to_string()).collect());

        let mut covered = vec![false; vertex_count];
        for s in &simplices {
            for &v in &s.0 {
                covered[v] = true;
            }
        }
        for (v, c) in covered.iter().enumerate() {
            if !c {
                simplices.push(Simplex(vec![v]));
            }
        }

        Ok(Self {
            name: String::from("complex"),
            vertex_count,
            labels,
            facets: maximal_simplices(simplices),
        })
    }

    /// Trusted constructor for builders whose facets are maximal by construction.
    pub(crate) fn from_maximal_facets(name: String, labels: Vec<String>, mut facets: Vec<Simplex>) -> Self {
        facets.sort();
        facets.dedup();
        Self {
            name,
            vertex_count: labels.len(),
            labels,
            facets,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    /// Facets in lexicographic order.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Dimension of the largest facet; `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.facets.iter().map(Simplex::dimension).max().unwrap_or(-1)
    }

    /// Whether `s` is a face of some facet. The empty simplex counts.
    pub fn contains(&self, s: &Simplex) -> bool {
        s.is_empty() || self.facets.iter().any(|f| s.is_face_of(f))
    }

    /// All simplices of dimension `q`, deduplicated and in lexicographic order.
    pub fn simplices(&self, q: usize) -> Vec<Simplex> {
        let size = q + 1;
        let mut out: HashSet<Simplex> = HashSet::new();
        let mut buf = Vec::with_capacity(size);
        for f in &self.facets {
            if f.len() < size {
                continue;
            }
            if f.len() == size {
                out.insert(f.clone());
                continue;
            }
            for_each_subset(&f.0, size, 0, &mut buf, &mut |s| {
                out.insert(Simplex(s.to_vec()));
            });
        }
        let mut v: Vec<Simplex> = out.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Number of simplices in each dimension `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let dim = self.dimension();
        (0..=dim).map(|q| self.simplices(q as usize).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(q, &n)| if q % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            name: self.name.clone(),
            vertex_count: self.vertex_count,
            labels: self.labels.clone(),
            facets: self.facets.iter().map(|f| f.0.clone()).collect(),
        }
    }

    pub fn from_document(doc: &ComplexDocument) -> Result<Self> {
        if doc.labels.len() != doc.vertex_count {
            return Err(Error::MalformedInput(format!(
                "vertex_count {} does not match {} labels",
                doc.vertex_count,
                doc.labels.len()
            )));
        }
        Ok(Self::build(&doc.facets, Some(doc.labels.clone()))?.with_name(doc.name.clone()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("complex document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ComplexDocument =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// JSON form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub name: String,
    pub vertex_count: usize,
    pub labels: Vec<String>,
    pub facets: Vec<Vec<VertexId>>,
}

fn for_each_subset(
    items: &[usize],
    size: usize,
    start: usize,
    buf: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if buf.len() == size {
        f(buf);
        return;
    }
    let need = size - buf.len();
    for i in start..=items.len() - need {
        buf.push(items[i]);
        for_each_subset(items, size, i + 1, buf, f);
        buf.pop();
    }
}

/// Drops simplices contained in another one of the list, returns the rest sorted.
fn maximal_simplices(mut simplices: Vec<Simplex>) -> Vec<Simplex> {
    simplices.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    simplices.dedup();
    let mut kept: Vec<Simplex> = Vec::new();
    for s in simplices {
        if !kept.iter().any(|k| k.len() > s.len() && s.is_face_of(k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// The complex of all subsets of `{0..m-1}` with at most `k` elements,
/// i.e. the `(k-1)`-skeleton of the `(m-1)`-simplex.
pub fn simplex_skeleton(m: usize, k: usize) -> Result<SimplicialComplex> {
    if m < 1 || k < 1 || k > m {
        return Err(Error::Parameter(format!(
            "skeleton needs 1 <= k <= m, got m={m}, k={k}"
        )));
    }
    let mut facets = Vec::new();
    let mut buf = Vec::new();
    let all: Vec<usize> = (0..m).collect();
    for_each_subset(&all, k, 0, &mut buf, &mut |s| facets.push(Simplex(s.to_vec())));
    let labels = (1..=m).map(|i| i.to_string()).collect();
    Ok(SimplicialComplex::from_maximal_facets(format!("[{m}]^({k})"), labels, facets))
}

/// Join of two complexes. Vertices of `k` keep their ids, vertices of `l` are
/// shifted by `k.vertex_count()`; labels are prefixed with `0:` and `1:`.
pub fn join(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let shift = k.vertex_count;
    let labels = k
        .labels
        .iter()
        .map(|s| format!("0:{s}"))
        .chain(l.labels.iter().map(|s| format!("1:{s}")))
        .collect();
    let name = format!("({})*({})", k.name, l.name);
    let facets = match (k.facets.is_empty(), l.facets.is_empty()) {
        (true, _) => l.facets.iter().map(|g| shifted(g, shift)).collect(),
        (_, true) => k.facets.clone(),
        _ => {
            let mut out = Vec::with_capacity(k.facets.len() * l.facets.len());
            for f in &k.facets {
                for g in &l.facets {
                    let mut v = f.0.clone();
                    v.extend(g.0.iter().map(|&x| x + shift));
                    out.push(Simplex(v));
                }
            }
            out
        }
    };
    SimplicialComplex::from_maximal_facets(name, labels, facets)
}

fn shifted(s: &Simplex, shift: usize) -> Simplex {
    Simplex(s.0.iter().map(|&x| x + shift).collect())
}

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds from a list of equally long rows. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::MalformedInput(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for (j, x) in r.iter().enumerate() {
                m.entries[i * cols + j] = x.clone().into();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::Parameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.entries[source * self.cols + j].clone();
            if !s.is_zero() {
                self.entries[target * self.cols + j] += factor * s;
            }
        }
    }

    /// `col[target] += factor * col[source]`
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.entries[i * self.cols + source].clone();
            if !s.is_zero() {
                self.entries[i * self.cols + target] += factor * s;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(BigInt::to_string).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &MatrixDocument) -> Result<Self> {
        if doc.entries.len() != doc.rows {
            return Err(Error::MalformedInput("row count mismatch".into()));
        }
        let mut m = Self::zeros(doc.rows, doc.cols);
        for (i, r) in doc.entries.iter().enumerate() {
            if r.len() != doc.cols {
                return Err(Error::MalformedInput(format!("row {i} has wrong length")));
            }
            for (j, s) in r.iter().enumerate() {
                let v: BigInt = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::MalformedInput(format!("not an integer: {s:?}")))?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

/// JSON form of a matrix; integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

/// Sparse boundary operator: one column per `q`-simplex holding
/// `(row index, ±1)` pairs. Rows are the `(q-1)`-simplices (or the single
/// augmentation row in reduced degree 0).
pub(crate) struct SparseBoundary {
    pub rows: usize,
    pub columns: Vec<Vec<(usize, i64)>>,
}

pub(crate) fn sparse_boundary(k: &SimplicialComplex, q: usize, reduced: bool) -> SparseBoundary {
    let cells = k.simplices(q);
    if q == 0 {
        return if reduced {
            SparseBoundary {
                rows: 1,
                columns: cells.iter().map(|_| vec![(0, 1)]).collect(),
            }
        } else {
            SparseBoundary {
                rows: 0,
                columns: cells.iter().map(|_| Vec::new()).collect(),
            }
        };
    }
    let faces = k.simplices(q - 1);
    let index: HashMap<&Simplex, usize> = faces.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let columns = cells
        .iter()
        .map(|s| {
            s.boundary_faces()
                .map(|(pos, face)| (index[&face], if pos % 2 == 0 { 1 } else { -1 }))
                .collect()
        })
        .collect();
    SparseBoundary {
        rows: faces.len(),
        columns,
    }
}

/// Matrix of the boundary map from `q`-simplices to `(q-1)`-simplices, both
/// in lexicographic order. Deleting the vertex at position `i` carries the
/// sign `(-1)^i`. For `q = 0` the reduced operator is the `1 x V` augmentation
/// row; the unreduced one has no rows.
pub fn boundary_matrix(k: &SimplicialComplex, q: usize, reduced: bool) -> Result<IntegerMatrix> {
    if q as isize > k.dimension() {
        return Err(Error::Parameter(format!(
            "boundary degree {q} exceeds dimension {}",
            k.dimension()
        )));
    }
    let sparse = sparse_boundary(k, q, reduced);
    let mut m = IntegerMatrix::zeros(sparse.rows, sparse.columns.len());
    for (j, col) in sparse.columns.iter().enumerate() {
        for &(i, v) in col {
            m.set(i, j, BigInt::from(v));
        }
    }
    Ok(m)
}

/// Integer chain: a finite formal sum of simplices of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerChain {
    dimension: isize,
    coefficients: BTreeMap<Simplex, BigInt>,
}

impl IntegerChain {
    pub fn zero(dimension: isize) -> Self {
        Self {
            dimension,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> isize {
        self.dimension
    }

    /// Adds `coefficient * simplex`, dropping the term if it cancels.
    pub fn add_term(&mut self, simplex: Simplex, coefficient: BigInt) -> Result<()> {
        if simplex.dimension() != self.dimension {
            return Err(Error::Parameter(format!(
                "simplex {simplex} does not have dimension {}",
                self.dimension
            )));
        }
        if coefficient.is_zero() {
            return Ok(());
        }
        match self.coefficients.entry(simplex) {
            Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    pub fn coefficient(&self, simplex: &Simplex) -> BigInt {
        self.coefficients.get(simplex).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &BigInt)> {
        self.coefficients.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scaled(&self, factor: &BigInt) -> IntegerChain {
        let mut out = IntegerChain::zero(self.dimension);
        if factor.is_zero() {
            return out;
        }
        for (s, c) in &self.coefficients {
            out.coefficients.insert(s.clone(), c * factor);
        }
        out
    }

    /// Simplicial boundary. The boundary of a 0-chain lives on the empty
    /// simplex (reduced convention).
    pub fn boundary(&self) -> IntegerChain {
        let mut acc: BTreeMap<Simplex, BigInt> = BTreeMap::new();
        for (s, c) in &self.coefficients {
            for (pos, face) in s.boundary_faces() {
                let e = acc.entry(face).or_insert_with(BigInt::zero);
                if pos % 2 == 0 {
                    *e += c;
                } else {
                    *e -= c;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        IntegerChain {
            dimension: self.dimension - 1,
            coefficients: acc,
        }
    }

    /// Checks that every keyed simplex belongs to `k`.
    pub fn is_supported_on(&self, k: &SimplicialComplex) -> bool {
        self.coefficients.keys().all(|s| k.contains(s))
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.coefficients.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}
