//! Pseudomanifolds, fundamental classes, orientation characters and mapping
//! degrees of simplicial maps.
//!
//! Two degree algorithms are provided. [`degree_homological`] pushes the whole
//! fundamental class forward and compares it with the target class;
//! [`degree_by_preimage`] counts, with signs, the facets lying over a single
//! target facet. They share no code beyond the simplex sign helper, so the
//! agreement between them is a genuine check.
//!
//! Orientation convention: [`orient`] gives the lexicographically smallest
//! facet coefficient `+1`. With that convention the fundamental class of a
//! join is the product of the factor classes, so degrees multiply under joins.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::chessboard::{PermutationAction, SimplicialMap};
use crate::error::{Error, Result};
use crate::homology::integer_json;
use crate::simplicial::{IntegerChain, Simplex, SimplicialComplex, VertexId};

/// Offending object found by [`pseudomanifold_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PseudomanifoldWitness {
    /// A facet of smaller dimension than the top one.
    LowFacet(Simplex),
    /// A ridge lying in a number of facets other than two.
    Ridge { ridge: Simplex, incidence: usize },
    /// Two facets not joined by a ridge path.
    Disconnected(Simplex, Simplex),
    /// Facets around an orientation-reversing loop.
    OrientationCycle(Vec<Simplex>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudomanifoldReport {
    pub pure: bool,
    pub ridge_regular: bool,
    pub strongly_connected: bool,
    pub orientable: bool,
    pub witness: Option<PseudomanifoldWitness>,
}

impl PseudomanifoldReport {
    pub fn is_pseudomanifold(&self) -> bool {
        self.pure && self.ridge_regular && self.strongly_connected
    }

    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| match w {
            PseudomanifoldWitness::LowFacet(s) => json!({"low_facet": s}),
            PseudomanifoldWitness::Ridge { ridge, incidence } => json!({"ridge": ridge, "incidence": incidence}),
            PseudomanifoldWitness::Disconnected(a, b) => json!({"disconnected": [a, b]}),
            PseudomanifoldWitness::OrientationCycle(c) => json!({"orientation_cycle": c}),
        });
        json!({
            "pure": self.pure,
            "ridge_regular": self.ridge_regular,
            "strongly_connected": self.strongly_connected,
            "orientable": self.orientable,
            "pseudomanifold": self.is_pseudomanifold(),
            "witness": witness,
        })
    }
}

/// Ridge -> indices of the facets containing it.
fn ridge_incidence(k: &SimplicialComplex) -> BTreeMap<Simplex, Vec<usize>> {
    let mut map: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    for (i, f) in k.facets().iter().enumerate() {
        for (_, r) in f.boundary_faces() {
            map.entry(r).or_default().push(i);
        }
    }
    map
}

pub fn pseudomanifold_check(k: &SimplicialComplex) -> Result<PseudomanifoldReport> {
    let facets = k.facets();
    if facets.is_empty() {
        return Err(Error::Parameter("pseudomanifold check on an empty complex".into()));
    }
    let top = k.dimension();
    let mut report = PseudomanifoldReport {
        pure: true,
        ridge_regular: true,
        strongly_connected: true,
        orientable: false,
        witness: None,
    };
    if let Some(low) = facets.iter().find(|f| f.dimension() != top) {
        report.pure = false;
        report.witness = Some(PseudomanifoldWitness::LowFacet(low.clone()));
    }
    let ridges = ridge_incidence(k);
    if let Some((r, fs)) = ridges.iter().find(|(_, fs)| fs.len() != 2) {
        report.ridge_regular = false;
        if report.witness.is_none() {
            report.witness = Some(PseudomanifoldWitness::Ridge {
                ridge: r.clone(),
                incidence: fs.len(),
            });
        }
    }
    let reached = facet_components(facets.len(), &ridges);
    if let Some(i) = reached.iter().position(|&c| c != 0) {
        report.strongly_connected = false;
        if report.witness.is_none() {
            report.witness = Some(PseudomanifoldWitness::Disconnected(facets[0].clone(), facets[i].clone()));
        }
    }
    if report.is_pseudomanifold() {
        match propagate_orientation(k, &ridges) {
            Ok(_) => report.orientable = true,
            Err(cycle) => report.witness = Some(PseudomanifoldWitness::OrientationCycle(cycle)),
        }
    }
    Ok(report)
}

fn facet_components(n: usize, ridges: &BTreeMap<Simplex, Vec<usize>>) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for fs in ridges.values() {
        for &a in fs {
            for &b in fs {
                if a != b {
                    adj[a].push(b);
                }
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if comp[b] == usize::MAX {
                    comp[b] = next;
                    queue.push_back(b);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Sign of facet `f` induced on its face obtained by deleting `v`.
fn induced_sign(f: &Simplex, v: VertexId) -> i32 {
    let pos = f.vertices().iter().position(|&x| x == v).expect("vertex of facet");
    if pos % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Breadth-first sign propagation from facet 0 (the lexicographically
/// smallest). Across a ridge the two facets must induce opposite
/// orientations. Returns the signs, or a facet loop along which they clash.
fn propagate_orientation(
    k: &SimplicialComplex,
    ridges: &BTreeMap<Simplex, Vec<usize>>,
) -> std::result::Result<Vec<i32>, Vec<Simplex>> {
    let facets = k.facets();
    let mut neighbours: Vec<Vec<(usize, i32)>> = vec![Vec::new(); facets.len()];
    for (ridge, fs) in ridges {
        if fs.len() != 2 {
            continue;
        }
        let (a, b) = (fs[0], fs[1]);
        let va = *facets[a].vertices().iter().find(|v| !ridge.contains_vertex(**v)).unwrap();
        let vb = *facets[b].vertices().iter().find(|v| !ridge.contains_vertex(**v)).unwrap();
        // sign_b = -sign_a * rel
        let rel = induced_sign(&facets[a], va) * induced_sign(&facets[b], vb);
        neighbours[a].push((b, rel));
        neighbours[b].push((a, rel));
    }
    let mut sign = vec![0i32; facets.len()];
    let mut parent = vec![usize::MAX; facets.len()];
    sign[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for &(b, rel) in &neighbours[a] {
            let want = -sign[a] * rel;
            if sign[b] == 0 {
                sign[b] = want;
                parent[b] = a;
                queue.push_back(b);
            } else if sign[b] != want {
                return Err(conflict_cycle(facets, &parent, a, b));
            }
        }
    }
    Ok(sign)
}

fn conflict_cycle(facets: &[Simplex], parent: &[usize], a: usize, b: usize) -> Vec<Simplex> {
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pa = path_to_root(a);
    let pb = path_to_root(b);
    let common = *pa.iter().find(|x| pb.contains(x)).expect("same tree");
    let mut cycle: Vec<usize> = pa.iter().copied().take_while(|&x| x != common).collect();
    cycle.push(common);
    let tail: Vec<usize> = pb.iter().copied().take_while(|&x| x != common).collect();
    cycle.extend(tail.into_iter().rev());
    cycle.into_iter().map(|i| facets[i].clone()).collect()
}

/// Top-dimensional cycle with coefficients `±1` on every facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalClass {
    complex: SimplicialComplex,
    chain: IntegerChain,
}

impl FundamentalClass {
    /// Validates a candidate chain: top dimension, every facet with
    /// coefficient `±1`, zero boundary.
    pub fn from_chain(complex: SimplicialComplex, chain: IntegerChain) -> Result<Self> {
        if chain.dimension() != complex.dimension() {
            return Err(Error::Integrity(format!(
                "chain of dimension {} on a complex of dimension {}",
                chain.dimension(),
                complex.dimension()
            )));
        }
        if chain.support_len() != complex.facets().len()
            || complex.facets().iter().any(|f| !chain.coefficient(f).abs().is_one())
        {
            return Err(Error::Integrity("chain is not ±1 on every facet".into()));
        }
        if !chain.boundary().is_zero() {
            return Err(Error::Integrity("chain is not a cycle".into()));
        }
        Ok(Self { complex, chain })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn chain(&self) -> &IntegerChain {
        &self.chain
    }

    /// Coefficient on a facet, `0` off the support.
    pub fn sign(&self, facet: &Simplex) -> i32 {
        self.chain.coefficient(facet).to_i32().unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        Self {
            complex: self.complex.clone(),
            chain: self.chain.scaled(&BigInt::from(-1)),
        }
    }

    /// Product orientation on the join of the two underlying complexes.
    pub fn join(&self, other: &FundamentalClass) -> Self {
        let complex = crate::simplicial::join(&self.complex, &other.complex);
        let shift = self.complex.vertex_count();
        let mut chain = IntegerChain::zero(complex.dimension());
        for (s, c) in self.chain.terms() {
            for (t, e) in other.chain.terms() {
                let mut v = s.vertices().to_vec();
                v.extend(t.vertices().iter().map(|x| x + shift));
                chain.add_term(Simplex::from_sorted(v), c * e).expect("join dimension");
            }
        }
        Self { complex, chain }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .chain
            .terms()
            .map(|(s, c)| json!({"simplex": s, "coefficient": integer_json(c)}))
            .collect();
        json!({"complex": self.complex.name(), "dimension": self.chain.dimension(), "chain": terms})
    }
}

/// Orients a strongly connected pseudomanifold.
pub fn orient(k: &SimplicialComplex) -> Result<FundamentalClass> {
    let report = pseudomanifold_check(k)?;
    if !report.is_pseudomanifold() {
        return Err(Error::Parameter(format!(
            "{} is not a pseudomanifold: {:?}",
            k.name(),
            report.witness
        )));
    }
    let ridges = ridge_incidence(k);
    let signs = propagate_orientation(k, &ridges).map_err(|cycle| Error::NonOrientable { cycle })?;
    let mut chain = IntegerChain::zero(k.dimension());
    for (f, s) in k.facets().iter().zip(signs) {
        chain.add_term(f.clone(), BigInt::from(s))?;
    }
    FundamentalClass::from_chain(k.clone(), chain)
}

/// `±1` according to whether the generator of `a` preserves or reverses `fc`.
pub fn orientation_character(fc: &FundamentalClass, a: &PermutationAction) -> Result<i32> {
    a.check_on(&fc.complex)?;
    let mut eps: Option<i32> = None;
    for (s, c) in fc.chain.terms() {
        let (image, perm_sign) =
            Simplex::from_ordered(&s.map_vertices(|v| a.apply(v))).expect("automorphism is injective");
        let target = fc.chain.coefficient(&image);
        if target.is_zero() {
            return Err(Error::Integrity(format!("image {image} of {s} is off the class")));
        }
        // pushforward coefficient on image = c * perm_sign = eps * target
        let e = if (c * BigInt::from(perm_sign)) == target { 1 } else { -1 };
        match eps {
            None => eps = Some(e),
            Some(prev) if prev != e => {
                return Err(Error::Integrity("pushforward is not proportional to the class".into()));
            }
            _ => {}
        }
    }
    Ok(eps.unwrap_or(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMethod {
    Homological,
    Preimage,
}

impl DegreeMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DegreeMethod::Homological => "homological",
            DegreeMethod::Preimage => "preimage",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub value: BigInt,
    pub method: DegreeMethod,
    pub residue_mod: Option<(u64, u64)>,
}

impl DegreeReport {
    pub fn with_modulus(mut self, r: u64) -> Self {
        let residue = self.value.mod_floor(&BigInt::from(r)).to_u64().expect("residue fits");
        self.residue_mod = Some((r, residue));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"degree": integer_json(&self.value), "method": self.method.as_str()});
        if let Some((r, res)) = self.residue_mod {
            v["mod"] = json!([r, res]);
        }
        v
    }
}

fn check_degree_inputs(f: &SimplicialMap, dom: &FundamentalClass, cod: &FundamentalClass) -> Result<()> {
    if dom.complex.dimension() != cod.complex.dimension() {
        return Err(Error::Parameter(format!(
            "dimension mismatch: {} vs {}",
            dom.complex.dimension(),
            cod.complex.dimension()
        )));
    }
    if f.domain_vertices() != dom.complex.vertex_count() || f.codomain_vertices() != cod.complex.vertex_count() {
        return Err(Error::Parameter("map does not fit the oriented complexes".into()));
    }
    Ok(())
}

/// Chain-level pushforward of the top class; collapsed simplices vanish.
pub fn pushforward(f: &SimplicialMap, fc: &FundamentalClass) -> IntegerChain {
    let mut out = IntegerChain::zero(fc.chain.dimension());
    for (s, c) in fc.chain.terms() {
        if let Some((image, sign)) = Simplex::from_ordered(&s.map_vertices(|v| f.apply(v))) {
            out.add_term(image, c * BigInt::from(sign)).expect("same dimension");
        }
    }
    out
}

/// Degree from `f_*[dom] = deg * [cod]`.
pub fn degree_homological(f: &SimplicialMap, dom: &FundamentalClass, cod: &FundamentalClass) -> Result<DegreeReport> {
    check_degree_inputs(f, dom, cod)?;
    let image = pushforward(f, dom);
    if let Some((s, _)) = image.terms().find(|(s, _)| cod.chain.coefficient(s).is_zero()) {
        return Err(Error::Integrity(format!("pushforward hits {s}, which is not a codomain facet")));
    }
    let first = &cod.complex.facets()[0];
    let value = image.coefficient(first) * cod.chain.coefficient(first);
    for facet in cod.complex.facets() {
        if image.coefficient(facet) != &value * cod.chain.coefficient(facet) {
            return Err(Error::Integrity(format!(
                "pushforward is not a multiple of the codomain class (facet {facet})"
            )));
        }
    }
    Ok(DegreeReport {
        value,
        method: DegreeMethod::Homological,
        residue_mod: None,
    })
}

/// Signed count of domain facets mapped bijectively onto `target`.
pub fn degree_by_preimage(
    f: &SimplicialMap,
    dom: &FundamentalClass,
    cod: &FundamentalClass,
    target: &Simplex,
) -> Result<DegreeReport> {
    check_degree_inputs(f, dom, cod)?;
    let target_sign = cod.sign(target);
    if target_sign == 0 {
        return Err(Error::Parameter(format!("{target} is not a facet of the codomain")));
    }
    let mut value = BigInt::zero();
    for facet in dom.complex.facets() {
        let images: Vec<VertexId> = facet.map_vertices(|v| f.apply(v));
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if sorted != target.vertices() {
            continue;
        }
        // sign of the permutation taking the target's order to the image order
        let mut inversions = 0;
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                if images[a] > images[b] {
                    inversions += 1;
                }
            }
        }
        let perm_sign = if inversions % 2 == 0 { 1 } else { -1 };
        value += BigInt::from(dom.sign(facet) * perm_sign * target_sign);
    }
    Ok(DegreeReport {
        value,
        method: DegreeMethod::Preimage,
        residue_mod: None,
    })
}

/// Options for [`enumerate_equivariant_maps`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerationCap {
    /// Largest admissible number of vertex orbits in the domain.
    pub max_orbits: usize,
}

impl Default for EnumerationCap {
    fn default() -> Self {
        Self { max_orbits: 4 }
    }
}

/// All simplicial maps `k -> l` with `f(a(v)) = b(f(v))`, in lexicographic
/// order of the images of the orbit representatives (smallest vertex of
/// each orbit).
pub fn enumerate_equivariant_maps(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    a: &PermutationAction,
    b: &PermutationAction,
    cap: EnumerationCap,
) -> Result<Vec<SimplicialMap>> {
    a.check_on(k)?;
    b.check_on(l)?;
    if a.order() != b.order() {
        return Err(Error::Parameter(format!(
            "action orders differ: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    // orbits of the domain vertices
    let mut orbit_of = vec![usize::MAX; k.vertex_count()];
    let mut orbits: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..k.vertex_count() {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let mut orbit = vec![v];
        orbit_of[v] = orbits.len();
        let mut w = a.apply(v);
        while w != v {
            orbit_of[w] = orbits.len();
            orbit.push(w);
            w = a.apply(w);
        }
        orbits.push(orbit);
    }
    if orbits.len() > cap.max_orbits {
        let candidates = BigInt::from(l.vertex_count()).pow(orbits.len() as u32);
        return Err(Error::CapExceeded {
            orbits: orbits.len(),
            cap: cap.max_orbits,
            candidates: candidates.to_string(),
        });
    }
    // admissible images per orbit: w with b^len(w) = w
    let choices: Vec<Vec<VertexId>> = orbits
        .iter()
        .map(|orbit| {
            let table = b.power(orbit.len());
            (0..l.vertex_count()).filter(|&w| table[w] == w).collect()
        })
        .collect();

    let mut maps = Vec::new();
    let mut pick = vec![0usize; orbits.len()];
    if choices.iter().any(Vec::is_empty) {
        return Ok(maps);
    }
    loop {
        let mut vertex_map = vec![0; k.vertex_count()];
        for (o, orbit) in orbits.iter().enumerate() {
            let mut w = choices[o][pick[o]];
            for &v in orbit {
                vertex_map[v] = w;
                w = b.apply(w);
            }
        }
        if let Ok(m) = SimplicialMap::new(k, l, vertex_map) {
            maps.push(m);
        }
        // odometer, last orbit fastest
        let mut i = orbits.len();
        loop {
            if i == 0 {
                return Ok(maps);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

/// Degrees of a family of maps and their residues modulo `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub modulus: u64,
    pub expected_residue: u64,
    pub degrees: Vec<BigInt>,
    pub residues: Vec<u64>,
    /// `+1` if every degree matched the expected residue, `-1` if every
    /// degree matched its negative (opposite global orientation).
    pub sign: Option<i32>,
    pub pairwise_congruent: bool,
    pub modulus_is_prime: bool,
    pub warning: Option<String>,
    /// First map breaking the congruence, with its degree.
    pub violation: Option<(usize, BigInt)>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.pairwise_congruent && self.sign.is_some()
    }

    pub fn degree_multiset(&self) -> BTreeMap<BigInt, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(d.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let multiset: Vec<Value> = self
            .degree_multiset()
            .iter()
            .map(|(d, n)| json!({"degree": integer_json(d), "count": n}))
            .collect();
        json!({
            "modulus": self.modulus,
            "expected_residue": self.expected_residue,
            "degrees": self.degrees.iter().map(integer_json).collect::<Vec<_>>(),
            "residues": self.residues,
            "multiset": multiset,
            "sign": self.sign,
            "pairwise_congruent": self.pairwise_congruent,
            "modulus_is_prime": self.modulus_is_prime,
            "warning": self.warning,
            "violation": self.violation.as_ref().map(|(i, d)| json!({"map": i, "degree": integer_json(d)})),
            "passed": self.passed(),
        })
    }
}

/// Computes every degree (both algorithms, which must agree) and checks that
/// all are congruent modulo `r` to `expected_residue`, or all to its
/// negative.
pub fn congruence_audit(
    maps: &[SimplicialMap],
    dom: &FundamentalClass,
    cod: &FundamentalClass,
    r: u64,
    expected_residue: i64,
) -> Result<CongruenceReport> {
    if r == 0 {
        return Err(Error::Parameter("modulus must be positive".into()));
    }
    let modulus = BigInt::from(r);
    let expected = BigInt::from(expected_residue).mod_floor(&modulus);
    let negated = (-&expected).mod_floor(&modulus);
    let prime = is_prime(r);
    let target = cod.complex.facets()[0].clone();

    let mut degrees = Vec::with_capacity(maps.len());
    for f in maps {
        let h = degree_homological(f, dom, cod)?;
        let p = degree_by_preimage(f, dom, cod, &target)?;
        if h.value != p.value {
            return Err(Error::Integrity(format!(
                "degree algorithms disagree: {} vs {}",
                h.value, p.value
            )));
        }
        degrees.push(h.value);
    }
    let residues: Vec<BigInt> = degrees.iter().map(|d| d.mod_floor(&modulus)).collect();
    let pairwise_congruent = residues.windows(2).all(|w| w[0] == w[1]);
    let sign = if residues.iter().all(|x| *x == expected) {
        Some(1)
    } else if residues.iter().all(|x| *x == negated) {
        Some(-1)
    } else {
        None
    };
    let violation = if sign.is_some() {
        None
    } else {
        let reference = &residues[0];
        let bad = residues
            .iter()
            .position(|x| x != reference)
            .unwrap_or(0);
        Some((bad, degrees[bad].clone()))
    };
    Ok(CongruenceReport {
        modulus: r,
        expected_residue: expected.to_u64().unwrap_or(0),
        residues: residues.iter().map(|x| x.to_u64().unwrap_or(0)).collect(),
        degrees,
        sign,
        pairwise_congruent,
        modulus_is_prime: prime,
        warning: (!prime).then(|| format!("{r} is not prime; the congruence is not guaranteed")),
        violation,
    })
}

/// Result of [`cone_extension_audit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionAudit {
    /// Degrees of all equivariant maps on the base, residues modulo the order.
    pub base_degrees: Vec<BigInt>,
    /// Number of equivariant maps on the extended complex `base * extra`.
    pub extended_maps: usize,
    /// Degrees of the restrictions of extended maps to the base; each
    /// restriction factors through a cone and must vanish.
    pub restricted_degrees: Vec<BigInt>,
}

impl ExtensionAudit {
    /// No base degree is divisible by `r`, and nothing extends.
    pub fn obstruction_confirmed(&self, r: u64) -> bool {
        let m = BigInt::from(r);
        self.extended_maps == 0
            && self.restricted_degrees.iter().all(Zero::is_zero)
            && self.base_degrees.iter().all(|d| !d.is_multiple_of(&m))
    }
}

/// Enumerates equivariant maps from `base` and from `base * extra` into the
/// codomain. A map on the join restricts, on `base * {x}` for a vertex `x`
/// of `extra`, to a map defined on a cone, so its restriction to `base` has
/// degree zero.
#[allow(clippy::too_many_arguments)]
pub fn cone_extension_audit(
    base: &SimplicialComplex,
    base_action: &PermutationAction,
    extra: &SimplicialComplex,
    extra_action: &PermutationAction,
    codomain: &SimplicialComplex,
    codomain_action: &PermutationAction,
    cap: EnumerationCap,
) -> Result<ExtensionAudit> {
    let dom_fc = orient(base)?;
    let cod_fc = orient(codomain)?;
    let target = codomain.facets()[0].clone();
    let base_maps = enumerate_equivariant_maps(base, codomain, base_action, codomain_action, cap)?;
    let base_degrees = base_maps
        .iter()
        .map(|f| degree_by_preimage(f, &dom_fc, &cod_fc, &target).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;

    let extended = crate::simplicial::join(base, extra);
    let extended_action = crate::chessboard::join_actions(base_action, extra_action)?;
    let ext_maps = enumerate_equivariant_maps(&extended, codomain, &extended_action, codomain_action, cap)?;
    let restricted_degrees = ext_maps
        .iter()
        .map(|f| {
            let g = SimplicialMap::new(base, codomain, f.vertex_map()[..base.vertex_count()].to_vec())?;
            degree_homological(&g, &dom_fc, &cod_fc).map(|r| r.value)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtensionAudit {
        base_degrees,
        extended_maps: ext_maps.len(),
        restricted_degrees,
    })
}

/// Coefficients of a chain keyed by simplex, as plain integers (for tests
/// and reports).
pub fn chain_signs(chain: &IntegerChain) -> HashMap<Simplex, i64> {
    chain
        .terms()
        .map(|(s, c)| (s.clone(), c.to_i64().expect("small coefficient")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chessboard::{
        canonical_projection, chessboard_complex, cyclic_row_action, cyclic_vertex_action, join_maps,
        row_transposition, vertex_transposition,
    };
    use crate::simplicial::{join, simplex_skeleton};

    fn factorial(n: i64) -> i64 {
        (1..=n).product()
    }

    #[test]
    fn chessboard_pseudomanifolds() {
        for r in 3..=5 {
            let rep = pseudomanifold_check(&chessboard_complex(r, r - 1).unwrap()).unwrap();
            assert!(rep.pure && rep.ridge_regular && rep.strongly_connected && rep.orientable, "r={r}");
        }
        for r in 2..=5 {
            assert!(pseudomanifold_check(&simplex_skeleton(r, r - 1).unwrap()).unwrap().orientable);
        }
    }

    #[test]
    fn impure_complex_reports_witness() {
        let k = SimplicialComplex::build(&[vec![0, 1, 2], vec![1, 2, 3], vec![3, 4]], None).unwrap();
        let rep = pseudomanifold_check(&k).unwrap();
        assert!(!rep.pure);
        assert_eq!(rep.witness, Some(PseudomanifoldWitness::LowFacet(Simplex::new(vec![3, 4]).unwrap())));
        assert!(orient(&k).is_err());
    }

    #[test]
    fn mobius_strip_and_projective_plane() {
        // 5-vertex Moebius strip has boundary ridges
        let mobius = SimplicialComplex::build(
            &[vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 0], vec![4, 0, 1]],
            None,
        )
        .unwrap();
        assert!(!pseudomanifold_check(&mobius).unwrap().ridge_regular);
        let rp2 = SimplicialComplex::build(
            &[
                vec![0, 1, 2],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 5],
                vec![0, 5, 1],
                vec![1, 2, 4],
                vec![2, 3, 5],
                vec![3, 4, 1],
                vec![4, 5, 2],
                vec![5, 1, 3],
            ],
            None,
        )
        .unwrap();
        let rep = pseudomanifold_check(&rp2).unwrap();
        assert!(rep.is_pseudomanifold() && !rep.orientable);
        match orient(&rp2) {
            Err(Error::NonOrientable { cycle }) => assert!(cycle.len() >= 2),
            other => panic!("expected non-orientable, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_pseudomanifold_rejected() {
        let two_circles =
            SimplicialComplex::build(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]], None)
                .unwrap();
        let rep = pseudomanifold_check(&two_circles).unwrap();
        assert!(!rep.strongly_connected);
        assert!(orient(&two_circles).is_err());
    }

    #[test]
    fn hexagon_orientation_alternates() {
        let k = chessboard_complex(3, 2).unwrap();
        let fc = orient(&k).unwrap();
        // walking around the cycle in a fixed direction every edge is
        // traversed with coefficient +1
        let signs = chain_signs(fc.chain());
        assert_eq!(signs.len(), 6);
        assert_eq!(signs[&k.facets()[0]], 1);
        assert!(fc.chain().boundary().is_zero());
        let mut degree_in = vec![0i64; 6];
        for (s, c) in &signs {
            degree_in[s.vertices()[1]] += c;
            degree_in[s.vertices()[0]] -= c;
        }
        assert!(degree_in.iter().all(|&x| x == 0));
    }

    #[test]
    fn orient_delta_54_is_a_cycle() {
        let fc = orient(&chessboard_complex(5, 4).unwrap()).unwrap();
        assert!(fc.chain().boundary().is_zero());
        assert_eq!(fc.chain().support_len(), 120);
    }

    #[test]
    fn characters() {
        let k = chessboard_complex(3, 2).unwrap();
        let fc = orient(&k).unwrap();
        assert_eq!(orientation_character(&fc, &PermutationAction::identity(6)).unwrap(), 1);
        assert_eq!(orientation_character(&fc, &cyclic_row_action(3, 2).unwrap()).unwrap(), 1);
        assert_eq!(orientation_character(&fc, &row_transposition(3, 2, 0, 1).unwrap()).unwrap(), -1);
        let s = orient(&simplex_skeleton(3, 2).unwrap()).unwrap();
        assert_eq!(orientation_character(&s, &vertex_transposition(3, 0, 2).unwrap()).unwrap(), -1);
        // not an automorphism
        let bogus = PermutationAction::new(vec![1, 0, 2, 3, 4, 5]).unwrap();
        assert!(orientation_character(&fc, &bogus).is_err());
    }

    #[test]
    fn xi_degrees_both_methods() {
        for r in 2..=5usize {
            let (dom, cod, xi) = canonical_projection(r, r - 1).unwrap();
            let fd = orient(&dom).unwrap();
            let fcod = orient(&cod).unwrap();
            let h = degree_homological(&xi, &fd, &fcod).unwrap();
            assert_eq!(h.value.abs(), BigInt::from(factorial(r as i64 - 1)));
            for t in cod.facets() {
                let p = degree_by_preimage(&xi, &fd, &fcod, t).unwrap();
                assert_eq!(p.value, h.value);
            }
        }
    }

    #[test]
    fn identity_has_degree_one() {
        let k = chessboard_complex(4, 3).unwrap();
        let fc = orient(&k).unwrap();
        let id = SimplicialMap::identity(&k);
        assert!(degree_homological(&id, &fc, &fc).unwrap().value.is_one());
        for t in k.facets() {
            assert!(degree_by_preimage(&id, &fc, &fc, t).unwrap().value.is_one());
        }
    }

    #[test]
    fn degree_flips_with_orientation() {
        let (dom, cod, xi) = canonical_projection(4, 3).unwrap();
        let fd = orient(&dom).unwrap();
        let fc = orient(&cod).unwrap();
        let d = degree_homological(&xi, &fd, &fc).unwrap().value;
        assert_eq!(degree_homological(&xi, &fd.negated(), &fc).unwrap().value, -&d);
        assert_eq!(degree_homological(&xi, &fd, &fc.negated()).unwrap().value, -&d);
        let t = &cod.facets()[2];
        assert_eq!(degree_by_preimage(&xi, &fd.negated(), &fc, t).unwrap().value, -&d);
    }

    #[test]
    fn degree_dimension_mismatch() {
        let hex = chessboard_complex(3, 2).unwrap();
        let s3 = simplex_skeleton(4, 3).unwrap();
        let f = SimplicialMap::new(&hex, &s3, vec![0, 1, 2, 0, 1, 2]).unwrap();
        let err = degree_homological(&f, &orient(&hex).unwrap(), &orient(&s3).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
    }

    #[test]
    fn join_orientation_is_the_product() {
        let a = chessboard_complex(3, 2).unwrap();
        let b = chessboard_complex(2, 1).unwrap();
        let prod = orient(&a).unwrap().join(&orient(&b).unwrap());
        let direct = orient(&join(&a, &b)).unwrap();
        assert_eq!(prod.chain(), direct.chain());
    }

    #[test]
    fn equivariant_maps_hexagon_to_triangle() {
        let k = chessboard_complex(3, 2).unwrap();
        let l = simplex_skeleton(3, 2).unwrap();
        let a = cyclic_row_action(3, 2).unwrap();
        let b = cyclic_vertex_action(3).unwrap();
        let maps = enumerate_equivariant_maps(&k, &l, &a, &b, EnumerationCap::default()).unwrap();
        assert_eq!(maps.len(), 9);
        assert!(maps.iter().all(|m| m.is_equivariant(&a, &b)));
        let (_, _, xi) = canonical_projection(3, 2).unwrap();
        assert!(maps.contains(&xi));
    }

    #[test]
    fn equivariant_maps_into_a_point() {
        let k = chessboard_complex(2, 1).unwrap();
        let point = simplex_skeleton(1, 1).unwrap();
        let a = cyclic_row_action(2, 1).unwrap();
        let trivial = PermutationAction::identity(1);
        assert!(enumerate_equivariant_maps(&k, &point, &a, &trivial, EnumerationCap::default()).is_err());
        let one = PermutationAction::identity(2);
        let maps = enumerate_equivariant_maps(&k, &point, &one, &trivial, EnumerationCap::default()).unwrap();
        assert_eq!(maps.len(), 1);
    }

    #[test]
    fn enumeration_cap_is_explicit() {
        let k = join(&chessboard_complex(3, 2).unwrap(), &join(&chessboard_complex(3, 2).unwrap(), &chessboard_complex(3, 1).unwrap()));
        let a = crate::chessboard::join_actions(
            &crate::chessboard::join_actions(&cyclic_row_action(3, 2).unwrap(), &cyclic_row_action(3, 2).unwrap()).unwrap(),
            &cyclic_row_action(3, 1).unwrap(),
        )
        .unwrap();
        let l = simplex_skeleton(3, 2).unwrap();
        let b = cyclic_vertex_action(3).unwrap();
        match enumerate_equivariant_maps(&k, &l, &a, &b, EnumerationCap::default()) {
            Err(Error::CapExceeded { orbits, candidates, .. }) => {
                assert_eq!(orbits, 5);
                assert_eq!(candidates, "243");
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn congruence_hexagon() {
        let k = chessboard_complex(3, 2).unwrap();
        let l = simplex_skeleton(3, 2).unwrap();
        let maps = enumerate_equivariant_maps(
            &k,
            &l,
            &cyclic_row_action(3, 2).unwrap(),
            &cyclic_vertex_action(3).unwrap(),
            EnumerationCap::default(),
        )
        .unwrap();
        let rep = congruence_audit(&maps, &orient(&k).unwrap(), &orient(&l).unwrap(), 3, 2).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.modulus_is_prime);
    }

    #[test]
    fn congruence_reports_violations_and_composites() {
        let (dom, cod, xi) = canonical_projection(3, 2).unwrap();
        let fd = orient(&dom).unwrap();
        let fc = orient(&cod).unwrap();
        let constant = SimplicialMap::new(&dom, &cod, vec![0; 6]).unwrap();
        let rep = congruence_audit(&[xi.clone(), constant], &fd, &fc, 3, 2).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.violation.as_ref().unwrap().0, 1);
        let rep = congruence_audit(&[xi], &fd, &fc, 4, 2).unwrap();
        assert!(!rep.modulus_is_prime && rep.warning.is_some());
    }

    #[test]
    fn join_degree_is_multiplicative() {
        let (dom, cod, xi) = canonical_projection(3, 2).unwrap();
        let (dom2, cod2, xi2) = canonical_projection(2, 1).unwrap();
        let f = join_maps(&xi, &xi2);
        let jd = orient(&join(&dom, &dom2)).unwrap();
        let jc = orient(&join(&cod, &cod2)).unwrap();
        let d = degree_homological(&f, &jd, &jc).unwrap().value;
        let d1 = degree_homological(&xi, &orient(&dom).unwrap(), &orient(&cod).unwrap()).unwrap().value;
        let d2 = degree_homological(&xi2, &orient(&dom2).unwrap(), &orient(&cod2).unwrap()).unwrap().value;
        assert_eq!(d, d1 * d2);
    }

    #[test]
    fn residue_in_report() {
        let (dom, cod, xi) = canonical_projection(3, 2).unwrap();
        let rep = degree_homological(&xi, &orient(&dom).unwrap(), &orient(&cod).unwrap()).unwrap().with_modulus(3);
        assert_eq!(rep.residue_mod, Some((3, 2)));
    }

    #[test]
    fn cone_extension_at_r2_and_r3() {
        for r in [2usize, 3] {
            let base = chessboard_complex(r, r - 1).unwrap();
            let extra = chessboard_complex(r, 1).unwrap();
            let cod = simplex_skeleton(r, r - 1).unwrap();
            let audit = cone_extension_audit(
                &base,
                &cyclic_row_action(r, r - 1).unwrap(),
                &extra,
                &cyclic_row_action(r, 1).unwrap(),
                &cod,
                &cyclic_vertex_action(r).unwrap(),
                EnumerationCap::default(),
            )
            .unwrap();
            assert!(!audit.base_degrees.is_empty());
            assert!(audit.obstruction_confirmed(r as u64), "r={r}: {audit:?}");
        }
    }
}
