//! Chessboard complexes, permutation actions on complexes, simplicial maps,
//! the row projection onto a simplex skeleton, and joins of maps and actions.
//!
//! Cells are numbered row-major: the cell in row `i` and column `j` (both
//! 0-based) has id `i * n + j`. Labels use 1-based `(i,j)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{join, simplex_skeleton, Simplex, SimplicialComplex, VertexId};

/// Complex of non-attacking rook placements on an `m x n` board.
pub fn chessboard_complex(m: usize, n: usize) -> Result<SimplicialComplex> {
    if m == 0 || n == 0 {
        return Err(Error::Parameter(format!("board must be non-empty, got {m}x{n}")));
    }
    let labels = (0..m)
        .flat_map(|i| (0..n).map(move |j| format!("({},{})", i + 1, j + 1)))
        .collect();
    let size = m.min(n);
    let mut facets = Vec::new();
    // injections from the shorter side into the longer one
    let mut used = vec![false; m.max(n)];
    let mut chosen = Vec::with_capacity(size);
    injections(size, m.max(n), &mut used, &mut chosen, &mut |img| {
        let mut cells: Vec<usize> = img
            .iter()
            .enumerate()
            .map(|(a, &b)| if m <= n { a * n + b } else { b * n + a })
            .collect();
        cells.sort_unstable();
        facets.push(Simplex::from_sorted(cells));
    });
    Ok(SimplicialComplex::from_maximal_facets(format!("Delta_{{{m},{n}}}"), labels, facets))
}

fn injections(len: usize, range: usize, used: &mut [bool], chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == len {
        f(chosen);
        return;
    }
    for b in 0..range {
        if !used[b] {
            used[b] = true;
            chosen.push(b);
            injections(len, range, used, chosen, f);
            chosen.pop();
            used[b] = false;
        }
    }
}

/// Row and column (0-based) of a cell id on a board with `n` columns.
pub fn cell_of(id: VertexId, n: usize) -> (usize, usize) {
    (id / n, id % n)
}

/// A cyclic group of vertex permutations, given by a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationAction {
    generator: Vec<VertexId>,
    order: usize,
}

impl PermutationAction {
    /// Validates that `generator` is a permutation and computes its exact order.
    pub fn new(generator: Vec<VertexId>) -> Result<Self> {
        let n = generator.len();
        let mut seen = vec![false; n];
        for &g in &generator {
            if g >= n || seen[g] {
                return Err(Error::Parameter(format!("{generator:?} is not a permutation")));
            }
            seen[g] = true;
        }
        let mut order = 1usize;
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while !visited[v] {
                visited[v] = true;
                v = generator[v];
                len += 1;
            }
            order = order.lcm(&len);
        }
        Ok(Self { generator, order })
    }

    pub fn identity(vertex_count: usize) -> Self {
        Self {
            generator: (0..vertex_count).collect(),
            order: 1,
        }
    }

    pub fn generator(&self) -> &[VertexId] {
        &self.generator
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.generator.len()
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.generator[v]
    }

    /// The `k`-th power of the generator as a vertex table.
    pub fn power(&self, k: usize) -> Vec<VertexId> {
        let k = k % self.order.max(1);
        (0..self.generator.len())
            .map(|mut v| {
                for _ in 0..k {
                    v = self.generator[v];
                }
                v
            })
            .collect()
    }

    pub fn apply_simplex(&self, s: &Simplex) -> Simplex {
        Simplex::new(s.map_vertices(|v| self.generator[v])).expect("permutation is injective")
    }

    /// Checks that the action lives on `k` and permutes its facets.
    pub fn check_on(&self, k: &SimplicialComplex) -> Result<()> {
        if self.generator.len() != k.vertex_count() {
            return Err(Error::Parameter(format!(
                "action on {} vertices does not fit complex {} with {} vertices",
                self.generator.len(),
                k.name(),
                k.vertex_count()
            )));
        }
        for f in k.facets() {
            let image = self.apply_simplex(f);
            if k.facets().binary_search(&image).is_err() {
                return Err(Error::Parameter(format!(
                    "generator maps facet {f} to {image}, which is not a facet of {}",
                    k.name()
                )));
            }
        }
        Ok(())
    }
}

/// Action of `Z/m` on `Delta_{m,n}` shifting rows, `(i,j) -> (i+1 mod m, j)`.
pub fn cyclic_row_action(m: usize, n: usize) -> Result<PermutationAction> {
    if m == 0 || n == 0 {
        return Err(Error::Parameter(format!("board must be non-empty, got {m}x{n}")));
    }
    let gen = (0..m * n)
        .map(|id| {
            let (i, j) = cell_of(id, n);
            ((i + 1) % m) * n + j
        })
        .collect();
    PermutationAction::new(gen)
}

/// Swap of rows `a` and `b` on `Delta_{m,n}`.
pub fn row_transposition(m: usize, n: usize, a: usize, b: usize) -> Result<PermutationAction> {
    if a >= m || b >= m || n == 0 {
        return Err(Error::Parameter(format!("rows {a},{b} out of range for {m} rows")));
    }
    let gen = (0..m * n)
        .map(|id| {
            let (i, j) = cell_of(id, n);
            let i = if i == a {
                b
            } else if i == b {
                a
            } else {
                i
            };
            i * n + j
        })
        .collect();
    PermutationAction::new(gen)
}

/// Cyclic shift `i -> i+1 mod m` on any skeleton of the simplex on `[m]`.
pub fn cyclic_vertex_action(m: usize) -> Result<PermutationAction> {
    PermutationAction::new((0..m).map(|i| (i + 1) % m).collect())
}

/// Swap of vertices `a` and `b` of `[m]`.
pub fn vertex_transposition(m: usize, a: usize, b: usize) -> Result<PermutationAction> {
    if a >= m || b >= m {
        return Err(Error::Parameter(format!("vertices {a},{b} out of range for {m}")));
    }
    let mut gen: Vec<usize> = (0..m).collect();
    gen.swap(a, b);
    PermutationAction::new(gen)
}

/// Outcome of a freeness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub free: bool,
    /// A simplex fixed setwise by a nonidentity power, and that power.
    pub witness: Option<(Simplex, usize)>,
}

/// Whether no nonidentity power of the generator fixes a simplex of `k` setwise.
pub fn is_free_action(k: &SimplicialComplex, a: &PermutationAction) -> Result<FreenessReport> {
    a.check_on(k)?;
    let powers: Vec<Vec<VertexId>> = (1..a.order()).map(|p| a.power(p)).collect();
    for q in 0..=k.dimension().max(-1) {
        for s in k.simplices(q as usize) {
            for (p, table) in powers.iter().enumerate() {
                let image = Simplex::new(s.map_vertices(|v| table[v])).expect("injective");
                if image == s {
                    return Ok(FreenessReport {
                        free: false,
                        witness: Some((s, p + 1)),
                    });
                }
            }
        }
    }
    Ok(FreenessReport {
        free: true,
        witness: None,
    })
}

/// Vertex map between two complexes that sends simplices to simplices.
/// Collapsing vertices together is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplicialMap {
    domain_vertices: usize,
    codomain_vertices: usize,
    vertex_map: Vec<VertexId>,
}

impl SimplicialMap {
    /// Checks that every facet of `domain` lands on a simplex of `codomain`.
    pub fn new(domain: &SimplicialComplex, codomain: &SimplicialComplex, vertex_map: Vec<VertexId>) -> Result<Self> {
        let map = Self::unchecked(domain.vertex_count(), codomain.vertex_count(), vertex_map)?;
        if let Some(f) = domain.facets().iter().find(|f| !codomain.contains(&map.image(f))) {
            return Err(Error::Parameter(format!(
                "vertex map is not simplicial: facet {f} goes to {}, not a simplex of {}",
                map.image(f),
                codomain.name()
            )));
        }
        Ok(map)
    }

    fn unchecked(domain_vertices: usize, codomain_vertices: usize, vertex_map: Vec<VertexId>) -> Result<Self> {
        if vertex_map.len() != domain_vertices {
            return Err(Error::Parameter(format!(
                "vertex map has {} entries for {domain_vertices} vertices",
                vertex_map.len()
            )));
        }
        if let Some(&w) = vertex_map.iter().find(|&&w| w >= codomain_vertices) {
            return Err(Error::Parameter(format!("image vertex {w} out of range")));
        }
        Ok(Self {
            domain_vertices,
            codomain_vertices,
            vertex_map,
        })
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        Self {
            domain_vertices: k.vertex_count(),
            codomain_vertices: k.vertex_count(),
            vertex_map: (0..k.vertex_count()).collect(),
        }
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn domain_vertices(&self) -> usize {
        self.domain_vertices
    }

    pub fn codomain_vertices(&self) -> usize {
        self.codomain_vertices
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.vertex_map[v]
    }

    /// Image vertex set of `s` (duplicates collapsed).
    pub fn image(&self, s: &Simplex) -> Simplex {
        let mut v = s.map_vertices(|x| self.vertex_map[x]);
        v.sort_unstable();
        v.dedup();
        Simplex::from_sorted(v)
    }

    /// Whether `self . a = b . self` on vertices.
    pub fn is_equivariant(&self, a: &PermutationAction, b: &PermutationAction) -> bool {
        a.vertex_count() == self.domain_vertices
            && b.vertex_count() == self.codomain_vertices
            && (0..self.domain_vertices).all(|v| self.apply(a.apply(v)) == b.apply(self.apply(v)))
    }
}

/// The row projection `Delta_{m,k} -> [m]^(k)`, `(i,j) -> i`.
pub fn canonical_projection(m: usize, k: usize) -> Result<(SimplicialComplex, SimplicialComplex, SimplicialMap)> {
    if k < 1 || k > m {
        return Err(Error::Parameter(format!("projection needs 1 <= k <= m, got m={m}, k={k}")));
    }
    let dom = chessboard_complex(m, k)?;
    let cod = simplex_skeleton(m, k)?;
    let map = SimplicialMap::new(&dom, &cod, (0..m * k).map(|id| id / k).collect())?;
    Ok((dom, cod, map))
}

/// Join of two simplicial maps on the joins of their domains and codomains.
pub fn join_maps(f: &SimplicialMap, g: &SimplicialMap) -> SimplicialMap {
    let vertex_map = f
        .vertex_map
        .iter()
        .copied()
        .chain(g.vertex_map.iter().map(|&w| w + f.codomain_vertices))
        .collect();
    SimplicialMap {
        domain_vertices: f.domain_vertices + g.domain_vertices,
        codomain_vertices: f.codomain_vertices + g.codomain_vertices,
        vertex_map,
    }
}

/// Diagonal action on a join; both factors must have the same order.
pub fn join_actions(a: &PermutationAction, b: &PermutationAction) -> Result<PermutationAction> {
    if a.order() != b.order() {
        return Err(Error::Parameter(format!(
            "cannot join actions of orders {} and {}",
            a.order(),
            b.order()
        )));
    }
    let shift = a.vertex_count();
    let gen = a
        .generator
        .iter()
        .copied()
        .chain(b.generator.iter().map(|&v| v + shift))
        .collect();
    PermutationAction::new(gen)
}

/// `d`-fold join of a complex with itself (`d >= 1`).
pub fn join_power(k: &SimplicialComplex, d: usize) -> Result<SimplicialComplex> {
    if d == 0 {
        return Err(Error::Parameter("join power needs d >= 1".into()));
    }
    let mut out = k.clone();
    for _ in 1..d {
        out = join(&out, k);
    }
    Ok(out)
}

pub fn join_map_power(f: &SimplicialMap, d: usize) -> Result<SimplicialMap> {
    if d == 0 {
        return Err(Error::Parameter("join power needs d >= 1".into()));
    }
    let mut out = f.clone();
    for _ in 1..d {
        out = join_maps(&out, f);
    }
    Ok(out)
}

pub fn join_action_power(a: &PermutationAction, d: usize) -> Result<PermutationAction> {
    if d == 0 {
        return Err(Error::Parameter("join power needs d >= 1".into()));
    }
    let mut out = a.clone();
    for _ in 1..d {
        out = join_actions(&out, a)?;
    }
    Ok(out)
}

/// `min{s, t, floor((s+t+1)/3)} - 1`: `Delta_{s,t}` is `(nu-1)`-connected.
pub fn connectivity_bound(s: usize, t: usize) -> isize {
    s.min(t).min((s + t + 1) / 3) as isize - 1
}

/// Simplicial model of the unit sphere in `d` copies of the reduced regular
/// representation of `Z/r`: the join of `d` copies of the boundary of the
/// `(r-1)`-simplex with the diagonal cyclic shift.
#[derive(Clone, Debug)]
pub struct RepresentationSphereModel {
    pub base_r: usize,
    pub copies: usize,
    pub complex: SimplicialComplex,
    pub action: PermutationAction,
}

impl RepresentationSphereModel {
    pub fn new(r: usize, d: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::Parameter(format!("representation sphere needs r >= 2, got {r}")));
        }
        let sphere = simplex_skeleton(r, r - 1)?;
        let complex = join_power(&sphere, d)?.with_name(format!("S(W_{r}^{d})"));
        let action = join_action_power(&cyclic_vertex_action(r)?, d)?;
        Ok(Self {
            base_r: r,
            copies: d,
            complex,
            action,
        })
    }

    pub fn dimension(&self) -> isize {
        (self.copies * (self.base_r - 1)) as isize - 1
    }

    /// Join power of `Delta_{r,r-1}` with its diagonal row action, and the
    /// join power of the row projection into this sphere.
    pub fn canonical_source(&self) -> Result<(SimplicialComplex, PermutationAction, SimplicialMap)> {
        let r = self.base_r;
        let (dom, _, xi) = canonical_projection(r, r - 1)?;
        let complex = join_power(&dom, self.copies)?;
        let action = join_action_power(&cyclic_row_action(r, r - 1)?, self.copies)?;
        let map = join_map_power(&xi, self.copies)?;
        Ok((complex, action, map))
    }
}
