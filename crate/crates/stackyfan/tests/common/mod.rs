//! Shared test utilities: independent brute-force oracles and seeded
//! random generators for lattices, cones and fans. Everything here stays
//! independent of the implementation paths it is used to check.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use stackyfan::cone::Cone;
use stackyfan::fan::Fan;
use stackyfan::lattice::IntVector;
use stackyfan::stacky::StackyFan;
use stackyfan::{Int, Rat};

pub fn iv(coords: &[i64]) -> IntVector {
    IntVector::from_i64(coords)
}

pub fn cone(gens: &[&[i64]]) -> Cone {
    let g: Vec<IntVector> = gens.iter().map(|r| iv(r)).collect();
    Cone::from_generators(&g).unwrap()
}

pub fn fan(dim: usize, cones: &[&[&[i64]]]) -> Fan {
    Fan::new(dim, cones.iter().map(|c| cone(c)).collect()).unwrap()
}

pub fn p2_fan() -> Fan {
    fan(
        2,
        &[
            &[&[1, 0], &[0, 1]],
            &[&[0, 1], &[-1, -1]],
            &[&[-1, -1], &[1, 0]],
        ],
    )
}

pub fn quadrant_fan() -> Fan {
    fan(
        2,
        &[
            &[&[1, 0], &[0, 1]],
            &[&[0, 1], &[-1, 0]],
            &[&[-1, 0], &[0, -1]],
            &[&[0, -1], &[1, 0]],
        ],
    )
}

pub fn p3_fan() -> Fan {
    let rays: [&[i64]; 4] = [&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]];
    let mut cones = Vec::new();
    for skip in 0..4 {
        let gens: Vec<IntVector> = (0..4).filter(|&i| i != skip).map(|i| iv(rays[i])).collect();
        cones.push(Cone::from_generators(&gens).unwrap());
    }
    Fan::new(3, cones).unwrap()
}

// ---------------------------------------------------------------------
// Brute-force lattice oracle.
//
// The point set of the integer span of `rows` inside a box is computed by
// breadth-first closure under +/- row steps inside a padded box. By the
// Steinitz rearrangement bound, any lattice point of the inner box is
// reachable through partial sums that never leave the padded box, so the
// closure restricted to the inner box is exactly the lattice there.
// ---------------------------------------------------------------------

pub fn lattice_points_in_box(rows: &[Vec<i64>], dim: usize, radius: i64) -> HashSet<Vec<i64>> {
    let max_entry = rows
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.abs())
        .max()
        .unwrap_or(0);
    let pad = radius + (dim as i64) * max_entry;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    let origin = vec![0i64; dim];
    seen.insert(origin.clone());
    queue.push_back(origin);
    while let Some(p) = queue.pop_front() {
        for row in rows {
            for sign in [1i64, -1] {
                let q: Vec<i64> = p
                    .iter()
                    .zip(row.iter())
                    .map(|(a, b)| a + sign * b)
                    .collect();
                if q.iter().all(|v| v.abs() <= pad) && !seen.contains(&q) {
                    seen.insert(q.clone());
                    queue.push_back(q);
                }
            }
        }
    }
    seen.into_iter()
        .filter(|p| p.iter().all(|v| v.abs() <= radius))
        .collect()
}

/// Exact rational Gaussian solve over i64 fractions: coefficients `c` with
/// `c * rows = target`, unique when the rows are independent.
pub fn solve_exact(rows: &[Vec<i64>], target: &[i64]) -> Option<Vec<(i64, i64)>> {
    // fractions as (num, den), den > 0
    fn norm(n: i128, d: i128) -> (i128, i128) {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 { a.abs() } else { gcd(b, a % b) }
        }
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        (s * n / g, s * d / g)
    }
    let r = rows.len();
    let d = target.len();
    let mut m: Vec<Vec<(i128, i128)>> = (0..d)
        .map(|j| {
            let mut row: Vec<(i128, i128)> = (0..r).map(|i| (rows[i][j] as i128, 1)).collect();
            row.push((target[j] as i128, 1));
            row
        })
        .collect();
    let add = |a: (i128, i128), b: (i128, i128)| norm(a.0 * b.1 + b.0 * a.1, a.1 * b.1);
    let mul = |a: (i128, i128), b: (i128, i128)| norm(a.0 * b.0, a.1 * b.1);
    let neg = |a: (i128, i128)| (-a.0, a.1);
    let mut pivots = vec![usize::MAX; r];
    let mut cur = 0;
    for col in 0..r {
        let Some(p) = (cur..d).find(|&i| m[i][col].0 != 0) else {
            return None;
        };
        m.swap(cur, p);
        let inv = (m[cur][col].1, m[cur][col].0);
        for v in m[cur].iter_mut() {
            *v = mul(*v, norm(inv.0, inv.1));
        }
        for i in 0..d {
            if i != cur && m[i][col].0 != 0 {
                let f = m[i][col];
                for k in 0..=r {
                    let sub = mul(f, m[cur][k]);
                    m[i][k] = add(m[i][k], neg(sub));
                }
            }
        }
        pivots[col] = cur;
        cur += 1;
    }
    for row in m.iter().skip(cur) {
        if row[r].0 != 0 {
            return None;
        }
    }
    Some(
        (0..r)
            .map(|col| {
                let v = m[pivots[col]][r];
                (v.0 as i64, v.1 as i64)
            })
            .collect(),
    )
}

/// Rational rank of small integer matrices, independent of the crate.
pub fn rank_exact(rows: &[Vec<i64>]) -> usize {
    // fraction-free integer elimination over i128
    let mut w: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let nrows = w.len();
    let ncols = if nrows > 0 { w[0].len() } else { 0 };
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| w[i][col] != 0) else {
            continue;
        };
        w.swap(rank, p);
        for i in rank + 1..nrows {
            if w[i][col] != 0 {
                let (a, b) = (w[rank][col], w[i][col]);
                for k in 0..ncols {
                    w[i][k] = w[i][k] * a - w[rank][k] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

// ---------------------------------------------------------------------
// Exact LP feasibility oracle (Fourier-Motzkin over BigRational), used to
// cross-check interiors_overlap.
// ---------------------------------------------------------------------

/// Feasibility of `{ x : <n, x> >= 1 for all n }` by exact variable
/// elimination.
pub fn lp_strictly_feasible(dim: usize, normals: &[IntVector]) -> bool {
    let one = Rat::from_integer(Int::one());
    let mut rows: Vec<(Vec<Rat>, Rat)> = normals
        .iter()
        .map(|n| {
            (
                n.coords()
                    .iter()
                    .map(|v| Rat::from_integer(v.clone()))
                    .collect(),
                one.clone(),
            )
        })
        .collect();
    for var in 0..dim {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for row in rows.into_iter() {
            if row.0[var].is_positive() {
                pos.push(row);
            } else if row.0[var].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for (pc, pr) in &pos {
            for (nc, nr) in &neg {
                let a = -nc[var].clone();
                let b = pc[var].clone();
                let coeffs: Vec<Rat> = pc
                    .iter()
                    .zip(nc.iter())
                    .map(|(p, n)| &a * p + &b * n)
                    .collect();
                let rhs = &a * pr + &b * nr;
                rest.push((coeffs, rhs));
            }
        }
        rows = rest;
        if rows
            .iter()
            .any(|(c, rhs)| c.iter().all(|v| v.is_zero()) && rhs.is_positive())
        {
            return false;
        }
        rows.retain(|(c, _)| !c.iter().all(|v| v.is_zero()));
    }
    true
}

// ---------------------------------------------------------------------
// Exact angular-coverage oracle for completeness of d=2 fans.
// ---------------------------------------------------------------------

fn cross2(a: &IntVector, b: &IntVector) -> Int {
    &a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0]
}

fn angular_less(a: &IntVector, b: &IntVector) -> bool {
    // upper half-plane (including positive x-axis) before lower
    let half = |v: &IntVector| -> u8 {
        let x = &v.coords()[0];
        let y = &v.coords()[1];
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha < hb;
    }
    cross2(a, b).is_positive()
}

/// d=2 completeness by exact angle chaining: the counterclockwise-oriented
/// maximal cones must tile the circle exactly once. Equivalent to the sum
/// of cone angles being a full turn.
pub fn complete_d2_by_angles(f: &Fan) -> bool {
    assert_eq!(f.ambient_dim(), 2);
    let mut arcs: Vec<(IntVector, IntVector)> = Vec::new();
    for c in f.max_cones() {
        if c.generators().len() != 2 {
            return false; // non-simplicial 2-cone cannot occur
        }
        let (g, h) = (c.generators()[0].clone(), c.generators()[1].clone());
        if cross2(&g, &h).is_positive() {
            arcs.push((g, h));
        } else {
            arcs.push((h, g));
        }
    }
    arcs.sort_by(|a, b| {
        if a.0 == b.0 {
            std::cmp::Ordering::Equal
        } else if angular_less(&a.0, &b.0) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let n = arcs.len();
    for i in 0..n {
        let next = &arcs[(i + 1) % n];
        if arcs[i].1 != next.0 {
            return false;
        }
    }
    n > 0
}

// ---------------------------------------------------------------------
// Seeded random generators.
// ---------------------------------------------------------------------

pub fn gen_vector(rng: &mut StdRng, dim: usize, bound: i64) -> Vec<i64> {
    (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn gen_nonzero_vector(rng: &mut StdRng, dim: usize, bound: i64) -> Vec<i64> {
    loop {
        let v = gen_vector(rng, dim, bound);
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// A random complete simplicial d=2 fan: the coordinate axes plus extra
/// random primitive rays, consecutive rays joined into cones.
pub fn gen_complete_d2_fan(rng: &mut StdRng, extra_rays: usize) -> Fan {
    let mut rays: Vec<IntVector> = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, 0]), iv(&[0, -1])];
    for _ in 0..extra_rays {
        let v = iv(&gen_nonzero_vector(rng, 2, 4)).primitive();
        if !rays.contains(&v) {
            rays.push(v);
        }
    }
    rays.sort_by(|a, b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if angular_less(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let n = rays.len();
    let cones: Vec<Cone> = (0..n)
        .map(|i| {
            Cone::from_generators(&[rays[i].clone(), rays[(i + 1) % n].clone()])
                .expect("consecutive rays span a pointed cone")
        })
        .collect();
    Fan::new(2, cones).expect("circular fan is valid")
}

/// Random stacky fan on a random complete d=2 fan with multiples <= 3.
pub fn gen_stacky_d2(rng: &mut StdRng, extra_rays: usize, max_multiple: i64) -> StackyFan {
    let f = gen_complete_d2_fan(rng, extra_rays);
    let gens: Vec<IntVector> = f
        .rays()
        .iter()
        .map(|r| r.scale(&Int::from(rng.gen_range(1..=max_multiple))))
        .collect();
    StackyFan::new(f, &gens).expect("positive multiples are valid")
}

/// Apply `steps` random stacky star subdivisions (lattice-preserving).
pub fn random_subdivisions(rng: &mut StdRng, s: &StackyFan, steps: usize) -> StackyFan {
    let mut cur = s.clone();
    for _ in 0..steps {
        let cones = cur.fan().max_cones();
        let pick = cones[rng.gen_range(0..cones.len())].clone();
        cur = cur.star_subdivide(&pick).expect("maximal cones subdivide");
    }
    cur
}

/// Scale the chosen generator of a random ray by a factor in 2..=max.
pub fn random_scaling(rng: &mut StdRng, s: &StackyFan, max_factor: i64) -> StackyFan {
    let rays = s.fan().rays();
    let target = rays[rng.gen_range(0..rays.len())].clone();
    let factor = Int::from(rng.gen_range(2..=max_factor));
    let gens: Vec<IntVector> = rays
        .iter()
        .map(|r| {
            let m = s.multiple(r).expect("rays carry multiples").clone();
            if *r == target {
                r.scale(&(m * &factor))
            } else {
                r.scale(&m)
            }
        })
        .collect();
    StackyFan::new(s.fan().clone(), &gens).expect("scaling preserves validity")
}
