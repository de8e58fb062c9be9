//! Exhaustive property checks shared by the property suite and the
//! acceptance run. Each returns a short summary or the first violation.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spreadforge::classify::{HyperbolicPointModel, PairKind};
use spreadforge::ddg::{complement_within, partial_complement, DdgParams, VertexPartition};
use spreadforge::gf::FieldSpec;
use spreadforge::projgeom::{klein_form, klein_inverse, klein_map, ProjectiveSpace, QuadraticForm, SymplecticForm};
use spreadforge::spgraph::Graph;
use spreadforge::spreads::SymplecticQuadrangle;

pub type Check = Result<String, String>;

pub fn field_axioms() -> Check {
    let qs = [2u32, 3, 4, 5, 7, 8, 9];
    let mut triples = 0;
    for q in qs {
        let f = FieldSpec::new(q).map_err(|e| e.to_string())?;
        let r = f.check_axioms().map_err(|e| format!("GF({q}): {e}"))?;
        if !r.exhaustive {
            return Err(format!("GF({q}) was not checked exhaustively"));
        }
        triples += r.triples_checked;
    }
    Ok(format!("GF(q) for q in {qs:?}, {triples} triples"))
}

pub fn polarity_involution() -> Check {
    let mut n = 0;
    for q in [3u32, 5, 7] {
        let space = ProjectiveSpace::new(3, Arc::new(FieldSpec::new(q).unwrap())).unwrap();
        let f = space.field();
        let form = SymplecticForm::standard(f, 2);
        let ranks: &[usize] = if q == 3 { &[1, 2, 3] } else { &[2] };
        for &r in ranks {
            for s in space.subspaces(r) {
                let p = s.perp(f, &form).map_err(|e| e.to_string())?;
                if p.rank() + s.rank() != 4 {
                    return Err(format!("q={q}: rank {} + {} != 4", s.rank(), p.rank()));
                }
                if p.perp(f, &form).unwrap() != s {
                    return Err(format!("q={q}: perp is not an involution on {s:?}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} subspaces of PG(3,q), q in [3,5,7]"))
}

pub fn quadric_counts() -> Check {
    for q in [3u32, 5, 7, 9] {
        let field = Arc::new(FieldSpec::new(q).unwrap());
        let s = |n| ProjectiveSpace::new(n, field.clone()).unwrap();
        let f = &*field;
        let qq = q as usize;
        let (s2, s3, s4, s5) = (s(2), s(3), s(4), s(5));
        let got = [
            QuadraticForm::parabolic(f, 1).points(&s2).len(),
            QuadraticForm::hyperbolic(f, 2).points(&s3).len(),
            QuadraticForm::elliptic3(f).points(&s3).len(),
            QuadraticForm::parabolic(f, 2).points(&s4).len(),
            klein_form(f).points(&s5).len(),
            QuadraticForm::hyperbolic(f, 3).points(&s5).len(),
        ];
        let want = [
            qq + 1,
            (qq + 1) * (qq + 1),
            qq * qq + 1,
            (qq + 1) * (qq * qq + 1),
            (qq * qq + 1) * (qq * qq + qq + 1),
            (qq * qq + 1) * (qq * qq + qq + 1),
        ];
        if got != want {
            return Err(format!("q={q}: counts {got:?}, closed forms {want:?}"));
        }
    }
    Ok("conic, Q+(3,q), Q-(3,q), Q(4,q), Q+(5,q) for q in [3,5,7,9]".into())
}

pub fn klein_bijectivity() -> Check {
    let mut total = 0;
    for q in [3u32, 5, 7] {
        let field = Arc::new(FieldSpec::new(q).unwrap());
        let pg3 = ProjectiveSpace::new(3, field.clone()).unwrap();
        let pg5 = ProjectiveSpace::new(5, field).unwrap();
        let f = pg3.field();
        let form = SymplecticForm::standard(f, 2);
        let kf = klein_form(f);
        let mut image = HashSet::new();
        for l in pg3.lines() {
            let x = klein_map(&pg3, &pg5, &l).map_err(|e| e.to_string())?;
            if !kf.eval(f, pg5.coords(x)).is_zero() {
                return Err(format!("q={q}: image of {l:?} is off the quadric"));
            }
            if klein_inverse(&pg5, x).unwrap() != l {
                return Err(format!("q={q}: inverse does not return {l:?}"));
            }
            // isotropic lines map into the hyperplane p01 + p23 = 0
            let p = pg5.coords(x);
            if l.is_totally_isotropic(f, &form) != f.add(p[0], p[5]).is_zero() {
                return Err(format!("q={q}: isotropy of {l:?} not detected by its image"));
            }
            image.insert(x);
        }
        if image.len() != kf.points(&pg5).len() {
            return Err(format!("q={q}: {} images, {} quadric points", image.len(), kf.points(&pg5).len()));
        }
        total += image.len();
    }
    Ok(format!("{total} lines mapped one-to-one onto the Klein quadric, q in [3,5,7]"))
}

/// Every vertex outside a hyperbolic pair has exactly one neighbour on each
/// of its two lines.
pub fn paired_lines() -> Check {
    let mut n = 0u64;
    for q in [3u32, 4, 5, 7] {
        let w = SymplecticQuadrangle::new(q).unwrap();
        let g = w.graph();
        for (u, p) in w.all_pairs().iter().enumerate() {
            let (l, lp) = (w.line_points(p.l), w.line_points(p.l_perp));
            for x in 0..w.num_points() {
                if p.points.binary_search(&x).is_ok() {
                    continue;
                }
                let a = l.iter().filter(|&&y| g.has_edge(x, y)).count();
                let b = lp.iter().filter(|&&y| g.has_edge(x, y)).count();
                if (a, b) != (1, 1) {
                    return Err(format!("q={q} pair {u}: vertex {x} has {a} and {b} neighbours"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} (pair, outside vertex) incidences, q in [3,4,5,7]"))
}

/// Two hyperbolic pairs share q+1 or 2q+1 of their connecting isotropic
/// lines, and q+1 shared lines are mutually disjoint.
pub fn line_set_dichotomy(qs: &[u32]) -> Check {
    let mut n = 0u64;
    for &q in qs {
        let w = SymplecticQuadrangle::new(q).unwrap();
        let qq = w.q();
        let sets: Vec<Vec<usize>> =
            (0..w.all_pairs().len()).map(|u| HyperbolicPointModel::lines_of_pair(&w, u)).collect();
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                let common: Vec<usize> = sets[a].iter().copied().filter(|l| sets[b].binary_search(l).is_ok()).collect();
                if common.len() == qq + 1 {
                    for (i, &k) in common.iter().enumerate() {
                        for &l in &common[i + 1..] {
                            if w.line_points(k).iter().any(|p| w.line_points(l).contains(p)) {
                                return Err(format!("q={q} pairs {a},{b}: shared lines {k} and {l} meet"));
                            }
                        }
                    }
                } else if common.len() != 2 * qq + 1 {
                    return Err(format!("q={q} pairs {a},{b} share {} lines", common.len()));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} pairs of hyperbolic pairs, q in {qs:?}"))
}

/// Sizes of the five pair kinds on the model points against the closed forms.
pub fn block_sizes() -> Check {
    for q in [3usize, 5, 7] {
        let w = SymplecticQuadrangle::new(q as u32).unwrap();
        let m = HyperbolicPointModel::new(&w).map_err(|e| e.to_string())?;
        let n = m.len();
        let mut sizes: BTreeMap<PairKind, usize> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if let Some(k) = m.kind(i, j) {
                    *sizes.entry(k).or_default() += 1;
                }
            }
        }
        let h = (q * q * q - q) / 2;
        let want: [(PairKind, usize); 5] = if q % 4 == 1 {
            [
                (PairKind::Tangent, n * (q - 1) * (q + 1) * (q + 1)),
                (PairKind::SecantPerp, n * h),
                (PairKind::SecantNonPerp, n * h * (q - 5) / 2),
                (PairKind::ExternalPerp, 0),
                (PairKind::ExternalNonPerp, n * h * (q - 1) / 2),
            ]
        } else {
            [
                (PairKind::Tangent, n * (q - 1) * (q + 1) * (q + 1)),
                (PairKind::SecantPerp, 0),
                (PairKind::SecantNonPerp, n * h * (q - 3) / 2),
                (PairKind::ExternalPerp, n * h),
                (PairKind::ExternalNonPerp, n * h * (q - 3) / 2),
            ]
        };
        for (k, size) in want {
            let got = sizes.get(&k).copied().unwrap_or(0);
            if got != size {
                return Err(format!("q={q}: {k:?} has {got} ordered pairs, expected {size}"));
            }
        }
        if n * n - n != sizes.values().sum::<usize>() {
            return Err(format!("q={q}: blocks do not cover all ordered pairs"));
        }
    }
    Ok("five ordered-pair blocks for q in [3,5,7]".into())
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    Graph::from_fn(n, |_, _| rng.gen_bool(p))
}

pub fn partial_complement_involution() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut n_checked = 0;
    for trial in 0..200 {
        let n = rng.gen_range(2..40);
        let g = random_graph(&mut rng, n, 0.4);
        let m = rng.gen_range(1..=n);
        let class_of: Vec<usize> = (0..n).map(|v| if v < m { v } else { rng.gen_range(0..m) }).collect();
        let p = VertexPartition::from_class_of(class_of).map_err(|e| e.to_string())?;
        if partial_complement(&partial_complement(&g, &p), &p) != g {
            return Err(format!("trial {trial}: partial complement is not an involution"));
        }
        if complement_within(&complement_within(&g, &p), &p) != g {
            return Err(format!("trial {trial}: complement within classes is not an involution"));
        }
        n_checked += 1;
    }
    let w = SymplecticQuadrangle::new(3).unwrap();
    let p = VertexPartition::from_classes(40, &spreadforge::spreads::construct_special_spread(&w).unwrap().lines)
        .unwrap();
    if partial_complement(&partial_complement(w.graph(), &p), &p) != *w.graph() {
        return Err("Sp(4,3) with a spread partition".into());
    }
    Ok(format!("{n_checked} random graphs and partitions, plus Sp(4,3)"))
}

/// Plain-loop divisible design check, independent of the library's audit.
pub fn oracle_ddg(g: &Graph, class_of: &[usize]) -> Option<DdgParams> {
    let n = g.n();
    let k = g.degree(0);
    if (0..n).any(|v| g.degree(v) != k) {
        return None;
    }
    let mut l1 = None;
    let mut l2 = None;
    for a in 0..n {
        for b in a + 1..n {
            let c = (0..n).filter(|&x| g.has_edge(a, x) && g.has_edge(b, x)).count();
            let slot = if class_of[a] == class_of[b] { &mut l1 } else { &mut l2 };
            match slot {
                None => *slot = Some(c),
                Some(v) if *v == c => {}
                Some(_) => return None,
            }
        }
    }
    let m = class_of.iter().max()? + 1;
    let sizes: Vec<usize> = (0..m).map(|i| class_of.iter().filter(|&&c| c == i).count()).collect();
    if sizes.iter().any(|&s| s != sizes[0]) {
        return None;
    }
    Some(DdgParams::new(n, k, l1?, l2?, m, sizes[0]))
}
