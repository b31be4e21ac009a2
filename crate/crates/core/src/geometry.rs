//! Exact polyhedral geometry at desk scale.
//!
//! A double description pass over rational data powers three conversions:
//! extreme rays of a polyhedral cone, vertex enumeration of an H-polytope
//! and facet enumeration of a V-polytope. Lineality is split off first, so
//! the incremental step always runs on a pointed cone seeded with the
//! nonnegative orthant of the reduced coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::matrix::{Matrix, Solution};
use crate::numerics::rational::{dot, Rational};

/// Generator description of `{x : a·x ≥ 0 for all rows a}`.
#[derive(Debug, Clone)]
pub struct ConeGenerators {
    /// Basis of the lineality space `{x : a·x = 0 for all rows}`.
    pub lineality: Vec<Vec<Rational>>,
    /// One generator per extreme ray (modulo lineality), primitive integer.
    pub rays: Vec<Vec<Rational>>,
}

/// Facet description of a V-polytope.
#[derive(Debug, Clone)]
pub struct HRepresentation {
    /// Facet rows `h·z ≤ β`.
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    /// Affine-hull rows `h·z = β`.
    pub equalities: Vec<(Vec<Rational>, Rational)>,
}

/// Extreme rays and lineality of the cone `{x ∈ R^dim : rows·x ≥ 0}` by the
/// double description method.
pub fn cone_extreme_rays(rows: &[Vec<Rational>], dim: usize) -> Result<ConeGenerators> {
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch(
                "cone row length differs from dimension".into(),
            ));
        }
    }
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if rows.is_empty() {
        return Ok(ConeGenerators {
            lineality: identity_basis(dim),
            rays: Vec::new(),
        });
    }

    let full = Matrix::from_rows(rows.clone())?;
    let lineality = full.nullspace();

    // Independent row subset: its constraints become the coordinate axes of
    // the reduced (pointed) problem.
    let mut basis_rows: Vec<Vec<Rational>> = Vec::new();
    let mut rest: Vec<Vec<Rational>> = Vec::new();
    let mut rank = 0;
    for row in rows {
        let mut candidate = basis_rows.clone();
        candidate.push(row.clone());
        let r = Matrix::from_rows(candidate)?.rank();
        if r > rank {
            rank = r;
            basis_rows.push(row);
        } else {
            rest.push(row);
        }
    }
    let k = rank;
    let basis = Matrix::from_rows(basis_rows.clone())?;
    let basis_t = basis.transpose();

    // Remaining rows in basis coordinates: a_j = Σ_i c_i · basis_i.
    let mut reduced_rest = Vec::with_capacity(rest.len());
    for row in &rest {
        match basis_t.solve(row)? {
            Solution::Unique(c) => reduced_rest.push(c),
            Solution::Underdetermined { particular, .. } => reduced_rest.push(particular),
            Solution::Inconsistent => {
                return Err(Error::Domain(
                    "row outside the span of the basis rows".into(),
                ))
            }
        }
    }

    // Double description on the pointed reduced cone, seeded with the
    // nonnegative orthant cut out by the basis rows themselves.
    let mut processed: Vec<Vec<Rational>> = identity_basis(k);
    let mut rays: Vec<Vec<Rational>> = identity_basis(k);
    for c in reduced_rest {
        rays = dd_step(&rays, &c, &processed, k);
        processed.push(c);
    }

    // Map reduced rays back to ambient preimages.
    let mut ambient = Vec::with_capacity(rays.len());
    for y in rays {
        match basis.solve(&y)? {
            Solution::Unique(x) => ambient.push(normalize_primitive(&x)),
            Solution::Underdetermined { particular, .. } => {
                ambient.push(normalize_primitive(&particular))
            }
            Solution::Inconsistent => {
                return Err(Error::Domain("reduced ray has no preimage".into()))
            }
        }
    }
    Ok(ConeGenerators {
        lineality,
        rays: ambient,
    })
}

/// One incremental double description step: cut `cone(rays)` with `c·y ≥ 0`.
fn dd_step(
    rays: &[Vec<Rational>],
    c: &[Rational],
    processed: &[Vec<Rational>],
    k: usize,
) -> Vec<Vec<Rational>> {
    let values: Vec<Rational> = rays.iter().map(|r| dot(c, r)).collect();
    let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
    let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
    if minus.is_empty() {
        return rays.to_vec();
    }
    let mut next: Vec<Vec<Rational>> = (0..rays.len())
        .filter(|i| !minus.contains(i))
        .map(|i| rays[i].clone())
        .collect();
    for &ip in &plus {
        for &im in &minus {
            if !adjacent(&rays[ip], &rays[im], processed, k) {
                continue;
            }
            // (c·r⁺)·r⁻ − (c·r⁻)·r⁺ lies on the new hyperplane and inside
            // the old cone.
            let combined: Vec<Rational> = rays[im]
                .iter()
                .zip(&rays[ip])
                .map(|(rm, rp)| &values[ip] * rm - &values[im] * rp)
                .collect();
            let combined = normalize_primitive(&combined);
            if !next.contains(&combined) {
                next.push(combined);
            }
        }
    }
    next
}

/// Algebraic adjacency: the processed rows active on both rays must have
/// rank `k − 2` for the pair to span a two-dimensional face.
fn adjacent(a: &[Rational], b: &[Rational], processed: &[Vec<Rational>], k: usize) -> bool {
    if k < 2 {
        return false;
    }
    let common: Vec<Vec<Rational>> = processed
        .iter()
        .filter(|row| dot(row, a).is_zero() && dot(row, b).is_zero())
        .cloned()
        .collect();
    if common.len() < k - 2 {
        return false;
    }
    let rank = if common.is_empty() {
        0
    } else {
        Matrix::from_rows(common).expect("uniform rows").rank()
    };
    rank == k - 2
}

/// Scales a rational vector to a primitive integer vector, preserving
/// direction.
fn normalize_primitive(v: &[Rational]) -> Vec<Rational> {
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|n| Rational::from_integer(n / &g))
        .collect()
}

fn identity_basis(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        })
        .collect()
}

/// Vertices of the polytope `{z : a·z ≤ b, e·z = f}`.
///
/// Unbounded or lineality-carrying input is an error, as is a dimension
/// above `cap` (raise the cap explicitly for bigger instances).
pub fn polytope_vertices(
    inequalities: &[(Vec<Rational>, Rational)],
    equalities: &[(Vec<Rational>, Rational)],
    dim: usize,
    cap: usize,
) -> Result<Vec<Vec<Rational>>> {
    if dim > cap {
        return Err(Error::Unsupported(format!(
            "vertex enumeration in dimension {dim} exceeds the cap {cap}"
        )));
    }
    // Homogenize with a final coordinate w: a·z ≤ b·w, w ≥ 0.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (a, b) in inequalities {
        let mut row: Vec<Rational> = a.iter().map(|x| -x).collect();
        row.push(b.clone());
        rows.push(row);
    }
    for (e, f) in equalities {
        let mut row: Vec<Rational> = e.iter().map(|x| -x).collect();
        row.push(f.clone());
        rows.push(row.iter().map(|x| -x).collect());
        rows.push(row);
    }
    let mut w_row = vec![Rational::zero(); dim];
    w_row.push(Rational::one());
    rows.push(w_row);

    let cone = cone_extreme_rays(&rows, dim + 1)?;
    if !cone.lineality.is_empty() {
        return Err(Error::Domain(
            "polytope description carries a lineality space".into(),
        ));
    }
    let mut vertices = Vec::new();
    for ray in cone.rays {
        let (w, z) = ray.split_last().expect("homogenized coordinate");
        if w.is_zero() {
            return Err(Error::Domain("polyhedron is unbounded".into()));
        }
        vertices.push(z.iter().map(|x| x / w).collect::<Vec<Rational>>());
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// Facet description of `conv(points)`, including affine-hull equalities
/// when the hull is not full dimensional.
pub fn polytope_facets(
    points: &[Vec<Rational>],
    dim: usize,
    cap: usize,
) -> Result<HRepresentation> {
    if dim > cap {
        return Err(Error::Unsupported(format!(
            "facet enumeration in dimension {dim} exceeds the cap {cap}"
        )));
    }
    if points.is_empty() {
        return Err(Error::Domain("facets of an empty point set".into()));
    }
    // Valid inequalities h·z ≤ β form the cone {(h, β) : β − h·p ≥ 0 ∀p}.
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut row: Vec<Rational> = p.iter().map(|x| -x).collect();
            row.push(Rational::one());
            row
        })
        .collect();
    let cone = cone_extreme_rays(&rows, dim + 1)?;
    let mut inequalities = Vec::new();
    for ray in cone.rays {
        let (beta, h) = ray.split_last().expect("offset coordinate");
        if h.iter().all(Zero::is_zero) {
            continue; // the trivial inequality 0 ≤ 1
        }
        inequalities.push((h.to_vec(), beta.clone()));
    }
    let equalities = cone
        .lineality
        .into_iter()
        .map(|ray| {
            let (beta, h) = ray.split_last().expect("offset coordinate");
            (h.to_vec(), beta.clone())
        })
        .collect();
    Ok(HRepresentation {
        inequalities,
        equalities,
    })
}
