use std::sync::Arc;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::projgeom::{klein_map, PointId, ProjectiveSpace, Subspace, SymplecticForm};
use crate::spgraph::{sp_graph_on, Graph};

/// Union of a hyperbolic line and its polar line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicPair {
    /// Line indices with `l < l_perp`.
    pub l: usize,
    pub l_perp: usize,
    /// All 2(q+1) points, sorted.
    pub points: Vec<PointId>,
}

/// The symplectic quadrangle W(q): PG(3,q) with the standard symplectic form,
/// every line indexed, and the hyperbolic pairs enumerated.
pub struct SymplecticQuadrangle {
    pg3: ProjectiveSpace,
    pg5: ProjectiveSpace,
    form: SymplecticForm,
    graph: Graph,
    lines: Vec<Subspace>,
    line_points: Vec<Vec<PointId>>,
    line_of_pair: Vec<u32>,
    isotropic: Vec<bool>,
    iso_lines: Vec<usize>,
    perp_line: Vec<usize>,
    klein: Vec<PointId>,
    pairs: Vec<HyperbolicPair>,
    pair_of_line: Vec<Option<usize>>,
    pair_bits: Vec<BitSet>,
}

impl std::fmt::Debug for SymplecticQuadrangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "W({})", self.q())
    }
}

impl SymplecticQuadrangle {
    pub fn new(q: u32) -> Result<Self> {
        Self::with_field(Arc::new(FieldSpec::new(q)?))
    }

    pub fn with_field(field: Arc<FieldSpec>) -> Result<Self> {
        let pg3 = ProjectiveSpace::new(3, field.clone())?;
        let pg5 = ProjectiveSpace::new(5, field)?;
        let f = pg3.field();
        let form = SymplecticForm::standard(f, 2);
        let graph = sp_graph_on(&pg3, &form);
        let v = pg3.num_points();
        let lines = pg3.lines();
        let line_points: Vec<Vec<PointId>> = lines.iter().map(|l| pg3.points_of(l)).collect();
        let mut line_of_pair = vec![u32::MAX; v * v];
        for (i, pts) in line_points.iter().enumerate() {
            for &a in pts {
                for &b in pts {
                    if a != b {
                        line_of_pair[a * v + b] = i as u32;
                    }
                }
            }
        }
        let isotropic: Vec<bool> = lines.iter().map(|l| l.is_totally_isotropic(f, &form)).collect();
        let iso_lines = (0..lines.len()).filter(|&i| isotropic[i]).collect();
        let perp_line: Vec<usize> = lines
            .iter()
            .map(|l| {
                let p = pg3.points_of(&l.perp(f, &form).expect("standard form is nondegenerate"));
                line_of_pair[p[0] * v + p[1]] as usize
            })
            .collect();
        let klein = lines
            .iter()
            .map(|l| klein_map(&pg3, &pg5, l))
            .collect::<Result<Vec<_>>>()?;
        let mut pairs = Vec::new();
        let mut pair_of_line = vec![None; lines.len()];
        for l in 0..lines.len() {
            let lp = perp_line[l];
            if isotropic[l] || lp < l {
                continue;
            }
            let mut points: Vec<PointId> =
                line_points[l].iter().chain(&line_points[lp]).copied().collect();
            points.sort_unstable();
            pair_of_line[l] = Some(pairs.len());
            pair_of_line[lp] = Some(pairs.len());
            pairs.push(HyperbolicPair { l, l_perp: lp, points });
        }
        let pair_bits = pairs.iter().map(|p| BitSet::from_iter(v, p.points.iter().copied())).collect();
        Ok(SymplecticQuadrangle {
            pg3,
            pg5,
            form,
            graph,
            lines,
            line_points,
            line_of_pair,
            isotropic,
            iso_lines,
            perp_line,
            klein,
            pairs,
            pair_of_line,
            pair_bits,
        })
    }

    pub fn q(&self) -> usize {
        self.pg3.q()
    }
    pub fn field(&self) -> &FieldSpec {
        self.pg3.field()
    }
    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        self.pg3.field_arc()
    }
    pub fn pg3(&self) -> &ProjectiveSpace {
        &self.pg3
    }
    pub fn pg5(&self) -> &ProjectiveSpace {
        &self.pg5
    }
    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }
    /// Sp(4,q) on the points of PG(3,q), vertex = point id.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }
    pub fn num_points(&self) -> usize {
        self.pg3.num_points()
    }
    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }
    pub fn line_points(&self, l: usize) -> &[PointId] {
        &self.line_points[l]
    }
    /// Index of the line through two distinct points.
    #[inline]
    pub fn line_of(&self, a: PointId, b: PointId) -> usize {
        debug_assert_ne!(a, b);
        self.line_of_pair[a * self.num_points() + b] as usize
    }
    pub fn line_index(&self, points: &[PointId]) -> Option<usize> {
        if points.len() < 2 {
            return None;
        }
        let l = self.line_of(points[0], points[1]);
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        (self.line_points[l] == sorted).then_some(l)
    }
    pub fn is_isotropic(&self, l: usize) -> bool {
        self.isotropic[l]
    }
    /// Indices of the (q+1)(q^2+1) totally isotropic lines.
    pub fn isotropic_lines(&self) -> &[usize] {
        &self.iso_lines
    }
    pub fn perp_line(&self, l: usize) -> usize {
        self.perp_line[l]
    }
    /// Klein image of a line as a point id of PG(5,q).
    pub fn klein_point(&self, l: usize) -> PointId {
        self.klein[l]
    }
    pub fn orthogonal(&self, a: PointId, b: PointId) -> bool {
        a == b || self.graph.has_edge(a, b)
    }
    pub fn all_pairs(&self) -> &[HyperbolicPair] {
        &self.pairs
    }
    pub fn pair_of_line(&self, l: usize) -> Option<usize> {
        self.pair_of_line[l]
    }
    pub fn pair_bits(&self, u: usize) -> &BitSet {
        &self.pair_bits[u]
    }
    /// Index of the pair with the given point set.
    pub fn pair_index(&self, points: &[PointId]) -> Option<usize> {
        let mut p = points.to_vec();
        p.sort_unstable();
        if p.len() < 2 {
            return None;
        }
        // a point on the same half as p[0] gives a hyperbolic line
        let u = p[1..]
            .iter()
            .map(|&c| self.line_of(p[0], c))
            .find(|&l| !self.isotropic[l])
            .and_then(|l| self.pair_of_line[l]);
        u.filter(|&u| self.pairs[u].points == p)
    }
}

/// The set of all hyperbolic pairs, |U_q| = q^2(q^2+1)/2. Requires q odd.
pub fn enumerate_u(w: &SymplecticQuadrangle) -> Result<&[HyperbolicPair]> {
    if w.q().is_multiple_of(2) {
        return Err(Error::Domain("hyperbolic-pair enumeration requires q odd".into()));
    }
    Ok(w.all_pairs())
}
