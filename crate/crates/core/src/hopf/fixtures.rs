use std::sync::Arc;

use super::{HopfAlgebraData, Tensor3};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_vec, r, CMat, CVec, ONE, ZERO};
use crate::report::CheckReport;

/// A finite group by multiplication table; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group inverse")
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteGroup {
            names: (0..n).map(|k| k.to_string()).collect(),
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Permutations of `{1,2,3}` in lexicographic order of their images; `(gh)(i) = g(h(i))`.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let names = ["e", "(23)", "(12)", "(123)", "(132)", "(13)"];
        let find = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| find([perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]]))
                    .collect()
            })
            .collect();
        FiniteGroup {
            names: names.iter().map(|s| s.to_string()).collect(),
            table,
        }
    }

    /// The subgroup on the listed elements, relabelled in the given order.
    pub fn subgroup(&self, elems: &[usize]) -> Result<FiniteGroup> {
        if elems.first() != Some(&0) {
            return Err(Error::shape("subgroup elements", "identity first", format!("{elems:?}")));
        }
        let mut table = vec![vec![0; elems.len()]; elems.len()];
        for (a, &ga) in elems.iter().enumerate() {
            for (b, &gb) in elems.iter().enumerate() {
                let p = self.mul(ga, gb);
                table[a][b] = elems.iter().position(|&x| x == p).ok_or_else(|| {
                    Error::shape("subgroup elements", "closed under multiplication", format!("{elems:?}"))
                })?;
            }
        }
        Ok(FiniteGroup {
            names: elems.iter().map(|&g| self.names[g].clone()).collect(),
            table,
        })
    }
}

/// The commutative Hopf *-algebra of functions on a finite group, basis `delta_g`.
pub fn function_algebra(g: &FiniteGroup) -> HopfAlgebraData {
    let n = g.order();
    let mut mult = Tensor3::zeros(n, n, n);
    let mut comult = Tensor3::zeros(n, n, n);
    for a in 0..n {
        mult.set(a, a, a, ONE);
        for h in 0..n {
            // delta_a = sum_h delta_h (x) delta_{h^{-1} a}
            comult.set(a, h, g.mul(g.inv(h), a), ONE);
        }
    }
    let mut counit = CVec::zeros(n);
    counit[0] = ONE;
    let mut antipode = CMat::zeros(n, n);
    for a in 0..n {
        antipode[(g.inv(a), a)] = ONE;
    }
    HopfAlgebraData::new(
        g.names.iter().map(|s| format!("δ_{s}")).collect(),
        mult,
        CVec::from_element(n, ONE),
        comult,
        counit,
        antipode,
        CMat::identity(n, n),
    )
    .expect("function algebra shapes")
}

/// The cocommutative group algebra, basis `lambda_g`.
pub fn group_algebra(g: &FiniteGroup) -> HopfAlgebraData {
    let n = g.order();
    let mut mult = Tensor3::zeros(n, n, n);
    let mut comult = Tensor3::zeros(n, n, n);
    let mut antipode = CMat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            mult.set(a, b, g.mul(a, b), ONE);
        }
        comult.set(a, a, a, ONE);
        antipode[(g.inv(a), a)] = ONE;
    }
    let mut unit = CVec::zeros(n);
    unit[0] = ONE;
    HopfAlgebraData::new(
        g.names.iter().map(|s| format!("λ_{s}")).collect(),
        mult,
        unit,
        comult,
        CVec::from_element(n, ONE),
        antipode.clone(),
        antipode,
    )
    .expect("group algebra shapes")
}

/// The eight-dimensional Kac-Paljutkin algebra on the monomial basis `x^a y^b z^c`,
/// index `a + 2b + 4c`.
pub fn kac_paljutkin() -> HopfAlgebraData {
    const N: usize = 8;
    let idx = |a: usize, b: usize, c: usize| (a % 2) + 2 * (b % 2) + 4 * (c % 2);
    // z^2 = (1 + x + y - xy) / 2
    let z2 = {
        let mut v = CVec::zeros(N);
        v[idx(0, 0, 0)] = r(0.5);
        v[idx(1, 0, 0)] = r(0.5);
        v[idx(0, 1, 0)] = r(0.5);
        v[idx(1, 1, 0)] = r(-0.5);
        v
    };
    let mono_mul = |p: usize, q: usize| -> CVec {
        let (a, b, c) = (p & 1, (p >> 1) & 1, (p >> 2) & 1);
        let (a2, b2, c2) = (q & 1, (q >> 1) & 1, (q >> 2) & 1);
        // z x = y z and z y = x z swap the exponents when z passes
        let (a2, b2) = if c == 1 { (b2, a2) } else { (a2, b2) };
        let (aa, bb) = ((a + a2) % 2, (b + b2) % 2);
        let mut out = CVec::zeros(N);
        if c + c2 == 2 {
            for k in 0..4 {
                let (ka, kb) = (k & 1, (k >> 1) & 1);
                out[idx(aa + ka, bb + kb, 0)] += z2[k];
            }
        } else {
            out[idx(aa, bb, c + c2)] = ONE;
        }
        out
    };
    let mut mult = Tensor3::zeros(N, N, N);
    for p in 0..N {
        for q in 0..N {
            let v = mono_mul(p, q);
            for k in 0..N {
                mult.set(p, q, k, v[k]);
            }
        }
    }
    let mul = |x: &CVec, y: &CVec| -> CVec {
        let mut out = CVec::zeros(N);
        for i in 0..N {
            for j in 0..N {
                if x[i] == ZERO || y[j] == ZERO {
                    continue;
                }
                for k in 0..N {
                    out[k] += x[i] * y[j] * mult.get(i, j, k);
                }
            }
        }
        out
    };
    let mul2 = |x: &CMat, y: &CMat| -> CMat {
        let mut out = CMat::zeros(N, N);
        for a in 0..N {
            for b in 0..N {
                if x[(a, b)] == ZERO {
                    continue;
                }
                for c in 0..N {
                    for d in 0..N {
                        if y[(c, d)] == ZERO {
                            continue;
                        }
                        let w = x[(a, b)] * y[(c, d)];
                        for k in 0..N {
                            for l in 0..N {
                                out[(k, l)] += w * mult.get(a, c, k) * mult.get(b, d, l);
                            }
                        }
                    }
                }
            }
        }
        out
    };
    let e = |i: usize| crate::linalg::unit_vec(N, i);
    let (one, x, y, z) = (idx(0, 0, 0), idx(1, 0, 0), idx(0, 1, 0), idx(0, 0, 1));
    let pure = |i: usize, j: usize| {
        let mut m = CMat::zeros(N, N);
        m[(i, j)] = ONE;
        m
    };
    let dx = pure(x, x);
    let dy = pure(y, y);
    let mut pref = CMat::zeros(N, N);
    pref[(one, one)] = r(0.5);
    pref[(one, x)] = r(0.5);
    pref[(y, one)] = r(0.5);
    pref[(y, x)] = r(-0.5);
    let dz = mul2(&pref, &pure(z, z));
    let mut comult = Tensor3::zeros(N, N, N);
    for p in 0..N {
        let (a, b, c) = (p & 1, (p >> 1) & 1, (p >> 2) & 1);
        let mut d = pure(one, one);
        if a == 1 {
            d = mul2(&d, &dx);
        }
        if b == 1 {
            d = mul2(&d, &dy);
        }
        if c == 1 {
            d = mul2(&d, &dz);
        }
        for j in 0..N {
            for k in 0..N {
                comult.set(p, j, k, d[(j, k)]);
            }
        }
    }
    let z_inv = mul(&e(z), &z2);
    let mut antipode = CMat::zeros(N, N);
    let mut star = CMat::zeros(N, N);
    for p in 0..N {
        let (a, b, c) = (p & 1, (p >> 1) & 1, (p >> 2) & 1);
        // both maps reverse the order x^a y^b z^c
        let xs = if a == 1 { e(x) } else { e(one) };
        let ys = if b == 1 { e(y) } else { e(one) };
        let zs = if c == 1 { e(z) } else { e(one) };
        let zst = if c == 1 { z_inv.clone() } else { e(one) };
        let s = mul(&mul(&zs, &ys), &xs);
        let st = mul(&mul(&zst, &ys), &xs);
        antipode.set_column(p, &s);
        star.set_column(p, &st);
    }
    let labels = (0..N)
        .map(|p| {
            let mut s = String::new();
            if p & 1 == 1 {
                s.push('x');
            }
            if p & 2 == 2 {
                s.push('y');
            }
            if p & 4 == 4 {
                s.push('z');
            }
            if s.is_empty() {
                s.push('1');
            }
            s
        })
        .collect();
    HopfAlgebraData::new(
        labels,
        mult,
        e(one),
        comult,
        CVec::from_element(N, ONE),
        antipode,
        star,
    )
    .expect("Kac-Paljutkin shapes")
}

/// A surjective Hopf *-homomorphism `p: source -> target`, recording a closed quantum subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupSurjection {
    pub name: String,
    pub source: Arc<HopfAlgebraData>,
    pub target: Arc<HopfAlgebraData>,
    /// `target.dim x source.dim`, acting on coordinate columns.
    pub map: CMat,
}

impl SubgroupSurjection {
    /// Restriction of functions from a finite group to the subgroup on `elems`.
    pub fn restriction(name: &str, g: &FiniteGroup, elems: &[usize]) -> Result<Self> {
        let h = g.subgroup(elems)?;
        let mut map = CMat::zeros(elems.len(), g.order());
        for (k, &e) in elems.iter().enumerate() {
            map[(k, e)] = ONE;
        }
        Ok(SubgroupSurjection {
            name: name.to_string(),
            source: Arc::new(function_algebra(g)),
            target: Arc::new(function_algebra(&h)),
            map,
        })
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        &self.map * x
    }

    /// Residuals of the Hopf *-homomorphism and surjectivity conditions.
    pub fn validate(&self, tol: f64) -> Result<CheckReport> {
        let (s, t) = (&self.source, &self.target);
        if self.map.shape() != (t.dim, s.dim) {
            return Err(Error::shape(
                "subgroup map",
                format!("[{},{}]", t.dim, s.dim),
                format!("{:?}", self.map.shape()),
            ));
        }
        let mut rep = CheckReport::new();
        let mut alg: f64 = max_abs_vec(&(self.apply(&s.unit) - &t.unit));
        let mut coalg: f64 = 0.0;
        let mut star: f64 = 0.0;
        for i in 0..s.dim {
            let ei = s.basis(i);
            for j in 0..s.dim {
                let ej = s.basis(j);
                let lhs = self.apply(&s.mul(&ei, &ej));
                let rhs = t.mul(&self.apply(&ei), &self.apply(&ej));
                alg = alg.max(max_abs_vec(&(lhs - rhs)));
            }
            let lhs = &self.map * s.comul(&ei) * self.map.transpose();
            coalg = coalg.max(max_abs(&(lhs - t.comul(&self.apply(&ei)))));
            coalg = coalg.max((s.counit[i] - t.counit_of(&self.apply(&ei))).norm());
            star = star.max(max_abs_vec(&(self.apply(&s.star_of(&ei)) - t.star_of(&self.apply(&ei)))));
        }
        rep.push("algebra_homomorphism", alg, tol);
        rep.push("coalgebra_homomorphism", coalg, tol);
        rep.push("star_preserving", star, tol);
        rep.push_flag("surjective", crate::linalg::rank(&self.map) == t.dim);
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::validate_hopf;

    #[test]
    fn s3_table_is_a_group() {
        let g = FiniteGroup::symmetric3();
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..6 {
                for c in 0..6 {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        assert_ne!(g.mul(1, 2), g.mul(2, 1));
    }

    #[test]
    fn s3_subgroup_restrictions_validate() {
        let g = FiniteGroup::symmetric3();
        for (name, elems) in [
            ("trivial", vec![0]),
            ("z2", vec![0, 2]),
            ("a3", vec![0, 3, 4]),
            ("s3", vec![0, 1, 2, 3, 4, 5]),
        ] {
            let p = SubgroupSurjection::restriction(name, &g, &elems).unwrap();
            assert!(p.validate(1e-12).unwrap().passed(), "{name}");
            assert!(validate_hopf(&p.target, 1e-12).unwrap().passed());
        }
        assert!(g.subgroup(&[0, 1, 2]).is_err());
    }

    #[test]
    fn kac_paljutkin_z_is_unitary_of_order_four() {
        let h = kac_paljutkin();
        let z = h.basis(4);
        let zz = h.mul(&z, &z);
        let z4 = h.mul(&zz, &zz);
        assert!(max_abs_vec(&(z4 - &h.unit)) < 1e-14);
        assert!(max_abs_vec(&(h.mul(&h.star_of(&z), &z) - &h.unit)) < 1e-14);
    }
}
