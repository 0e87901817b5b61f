use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::forms::Form;
use super::ideal::IdealRep;
use super::{discriminant, require_split, FieldSpec, QuadError, DISCRIMINANT_BOUND};
use crate::arith;

/// Structure of the form class group of a discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupData {
    /// Ordinary class number.
    pub h: u64,
    /// Narrow class number, the number of proper form classes.
    pub h_narrow: u64,
    /// Invariant factors `d_1 | d_2 | ...` of the narrow group, all `> 1`.
    /// Their product is `h_narrow`.
    pub cyclic_orders: Vec<u64>,
    /// One reduced form generating each cyclic factor.
    pub generators: Vec<Form>,
    /// Norm of the fundamental unit, read off the class of `(-1, b0, -c0)`.
    pub unit_norm: i8,
}

/// `l`-part bookkeeping for a split prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllClassData {
    /// `l`-part of the class number.
    pub h_ell: u64,
    /// `l`-part of the order of the class of the prime above `l`.
    pub ord_l: u64,
    /// `Cl'_K(l)` trivial: the `l`-Sylow subgroup is generated by `[l]`.
    pub cl_prime_trivial: bool,
    /// The class of `l` has trivial `l`-part.
    pub wild_trivial: bool,
}

/// Class group of a real quadratic field with an index from every reduced
/// form to its proper equivalence class.
///
/// Each class is a cycle of reduced forms under the rho operator; the index
/// holds every form of every cycle so class identification after reduction
/// is a lookup.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    spec: FieldSpec,
    d: i64,
    r: i64,
    index: BTreeMap<(i64, i64), u32>,
    reps: Vec<Form>,
    principal: u32,
    negative_principal: u32,
    data: ClassGroupData,
}

pub fn class_group(spec: &FieldSpec) -> Result<ClassGroupData, QuadError> {
    Ok(ClassGroup::new(spec)?.data().clone())
}

impl ClassGroup {
    pub fn new(spec: &FieldSpec) -> Result<Self, QuadError> {
        if spec.disc() >= DISCRIMINANT_BOUND {
            return Err(QuadError::BoundExceeded(spec.disc()));
        }
        let d = spec.disc() as i64;
        let r = spec.isqrt_disc() as i64;
        let mut group = Self {
            spec: *spec,
            d,
            r,
            index: BTreeMap::new(),
            reps: Vec::new(),
            principal: 0,
            negative_principal: 0,
            data: ClassGroupData {
                h: 0,
                h_narrow: 0,
                cyclic_orders: Vec::new(),
                generators: Vec::new(),
                unit_norm: 0,
            },
        };
        group.principal = group.discover(Form::principal(d));
        group.build();
        Ok(group)
    }

    pub fn for_radicand(m: u64) -> Result<Self, QuadError> {
        Self::new(&discriminant(m)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn data(&self) -> &ClassGroupData {
        &self.data
    }

    /// Total number of reduced forms across all classes.
    pub fn reduced_form_count(&self) -> usize {
        self.index.len()
    }

    /// Class id of a reduced form, walking and registering its cycle if new.
    fn discover(&mut self, f: Form) -> u32 {
        let f = f.reduce(self.d, self.r);
        if let Some(&id) = self.index.get(&(f.a, f.b)) {
            return id;
        }
        let id = self.reps.len() as u32;
        self.reps.push(f);
        let mut g = f;
        loop {
            self.index.insert((g.a, g.b), id);
            g = g.rho(self.d, self.r);
            if g == f {
                break;
            }
        }
        id
    }

    /// Class id of any form of the right discriminant.
    pub fn class_of(&self, f: &Form) -> u32 {
        let f = f.reduce(self.d, self.r);
        *self
            .index
            .get(&(f.a, f.b))
            .expect("every reduced form belongs to a discovered cycle")
    }

    fn mul_forms(&self, f: &Form, g: &Form) -> Form {
        f.compose(g, self.d).reduce(self.d, self.r)
    }

    /// Multiplies two classes.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.class_of(&self.mul_forms(&self.reps[x as usize], &self.reps[y as usize]))
    }

    pub fn representative(&self, id: u32) -> Form {
        self.reps[id as usize]
    }

    pub fn principal_class(&self) -> u32 {
        self.principal
    }

    /// Prime forms `(p, b, c)` for every prime `p` up to the Minkowski bound
    /// `sqrt(D)/2` that is not inert.
    fn prime_forms(&self) -> Vec<Form> {
        let d = self.d;
        let bound = (self.r / 2 + 1) as u64;
        let mut out = Vec::new();
        for p in 2..=bound {
            if !arith::is_prime_u64(p) {
                continue;
            }
            let b = if p == 2 {
                (0..4i64).find(|b| (b * b - d).rem_euclid(8) == 0)
            } else {
                arith::sqrt_mod_prime(d, p).map(|t| {
                    let t = t as i64;
                    if (t - d).rem_euclid(2) == 0 {
                        t
                    } else {
                        t + p as i64
                    }
                })
            };
            if let Some(b) = b {
                out.push(Form::from_ab(p as i64, b, d));
            }
        }
        out
    }

    /// Closes the subgroup generated by prime forms, recording one relation
    /// per new generator, then reads the invariant factors off the Smith
    /// normal form of the relation matrix.
    fn build(&mut self) {
        let d = self.d;
        let mut gens: Vec<Form> = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        // Elements of the current subgroup with an exponent vector each.
        let mut members: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
        members.insert(self.principal, Vec::new());

        let minus = Form::negative_principal(d);
        let mut candidates = vec![minus];
        candidates.extend(self.prime_forms());

        for g in candidates {
            let gid = self.discover(g);
            if members.contains_key(&gid) {
                continue;
            }
            let g = self.reps[gid as usize];
            let r = gens.len();
            // Order of g modulo the current subgroup.
            let mut powers = vec![self.reps[self.principal as usize], g];
            loop {
                let last = *powers.last().unwrap();
                let id = self.discover(last);
                if members.contains_key(&id) {
                    break;
                }
                let next = self.mul_forms(&last, &g);
                powers.push(next);
            }
            let k = powers.len() - 1;
            let landed = self.discover(powers[k]);
            let mut rel: Vec<i64> = members[&landed].iter().map(|&e| -e).collect();
            rel.resize(r, 0);
            rel.push(k as i64);
            for row in relations.iter_mut() {
                row.push(0);
            }
            relations.push(rel);

            let old: Vec<(u32, Vec<i64>)> =
                members.iter().map(|(&id, v)| (id, v.clone())).collect();
            for (i, gi) in powers.iter().enumerate().take(k).skip(1) {
                for (id, v) in &old {
                    let f = self.mul_forms(&self.reps[*id as usize], gi);
                    let nid = self.discover(f);
                    let mut nv = v.clone();
                    nv.resize(r, 0);
                    nv.push(i as i64);
                    members.entry(nid).or_insert(nv);
                }
            }
            for v in members.values_mut() {
                v.resize(r + 1, 0);
            }
            gens.push(g);
        }

        let h_narrow = self.reps.len() as u64;
        debug_assert_eq!(members.len() as u64, h_narrow);
        let (diag, vinv) = smith_normal_form(relations);
        let mut cyclic_orders = Vec::new();
        let mut generators = Vec::new();
        for (i, &s) in diag.iter().enumerate() {
            if s <= 1 {
                continue;
            }
            let mut acc = self.reps[self.principal as usize];
            for (j, &e) in vinv[i].iter().enumerate() {
                let e = e.rem_euclid(h_narrow as i64) as u64;
                acc = self.mul_forms(&acc, &self.power(&gens[j], e));
            }
            cyclic_orders.push(s as u64);
            generators.push(acc);
        }
        self.negative_principal = self.class_of(&minus);
        let unit_norm = if self.negative_principal == self.principal { -1 } else { 1 };
        let h = if unit_norm == -1 { h_narrow } else { h_narrow / 2 };
        self.data = ClassGroupData { h, h_narrow, cyclic_orders, generators, unit_norm };
    }

    /// `f^e`, reduced.
    pub fn power(&self, f: &Form, mut e: u64) -> Form {
        let mut base = f.reduce(self.d, self.r);
        let mut acc = Form::principal(self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_forms(&acc, &base);
            }
            base = self.mul_forms(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Order of a class in the narrow group.
    pub fn narrow_order(&self, id: u32) -> u64 {
        let mut k = 1;
        let mut cur = id;
        while cur != self.principal {
            cur = self.mul(cur, id);
            k += 1;
        }
        k
    }

    /// Order of a class in the ordinary class group: the first power that is
    /// principal or properly equivalent to `(-1, b0, -c0)`.
    pub fn wide_order(&self, id: u32) -> u64 {
        let mut k = 1;
        let mut cur = id;
        while cur != self.principal && cur != self.negative_principal {
            cur = self.mul(cur, id);
            k += 1;
        }
        k
    }

    /// Class of the ideal `a Z + (b + sqrt D)/2 Z` (content ignored).
    pub fn ideal_class(&self, ideal: &IdealRep) -> u32 {
        let (a, b) = ideal.reduced_ab(&self.spec);
        self.class_of(&Form::from_ab(a, b, self.d))
    }

    /// Order of the ideal class in `Cl_K`.
    pub fn class_order(&self, ideal: &IdealRep) -> u64 {
        self.wide_order(self.ideal_class(ideal))
    }

    /// Order of the image of the ideal class in the `l`-Sylow quotient.
    pub fn ell_part_order(&self, ideal: &IdealRep, ell: u64) -> u64 {
        ell_part(self.class_order(ideal), ell)
    }

    pub fn ell_class_data(&self, ell: u64) -> Result<EllClassData, QuadError> {
        require_split(&self.spec, ell)?;
        let l = IdealRep::prime_above(&self.spec, ell)?;
        let h_ell = ell_part(self.data.h, ell);
        let ord_l = self.ell_part_order(&l, ell);
        Ok(EllClassData {
            h_ell,
            ord_l,
            cl_prime_trivial: h_ell == ord_l,
            wild_trivial: ord_l == 1,
        })
    }
}

/// Largest power of `ell` dividing `n`.
pub(crate) fn ell_part(mut n: u64, ell: u64) -> u64 {
    let mut part = 1;
    while n % ell == 0 {
        n /= ell;
        part *= ell;
    }
    part
}

/// Smith normal form of a square integer matrix given by rows.
///
/// Returns the diagonal `s_1 | s_2 | ...` (nonnegative) and `V^{-1}` where
/// `U R V = diag(s)`.  Row `i` of `V^{-1}` expresses the `i`-th new basis
/// vector in the old coordinates.
#[allow(clippy::needless_range_loop)]
pub(crate) fn smith_normal_form(mut a: Vec<Vec<i64>>) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = a.len();
    let mut vinv: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for t in 0..n {
        loop {
            // Pivot: smallest nonzero |entry| in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (diag_of(&a), vinv);
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                vinv.swap(t, pj);
            }
            let mut clean = true;
            for i in (t + 1)..n {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in (t + 1)..n {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    // column j -= q * column t  =>  row t of V^{-1} += q * row j
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for k in 0..n {
                        vinv[t][k] += q * vinv[j][k];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility condition on the trailing block.
            let p = a[t][t];
            let bad = ((t + 1)..n).find(|&i| ((t + 1)..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for k in 0..n {
                vinv[t][k] = -vinv[t][k];
            }
        }
    }
    (diag_of(&a), vinv)
}

fn diag_of(a: &[Vec<i64>]) -> Vec<i64> {
    (0..a.len()).map(|i| a[i][i].abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_numbers() {
        let g = ClassGroup::for_radicand(5).unwrap();
        assert_eq!(g.data().h, 1);
        assert!(g.data().cyclic_orders.is_empty());
        let g = ClassGroup::for_radicand(10).unwrap();
        assert_eq!(g.data().h, 2);
        assert_eq!(g.data().unit_norm, -1);
        let g = ClassGroup::for_radicand(79).unwrap();
        assert_eq!(g.data().h, 3);
        // m = 3: eps = 2 + sqrt3 has norm +1, so h+ = 2h.
        let g = ClassGroup::for_radicand(3).unwrap();
        assert_eq!((g.data().h, g.data().h_narrow, g.data().unit_norm), (1, 2, 1));
    }

    #[test]
    fn smith_form_basic() {
        let (d, vinv) = smith_normal_form(vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(d, [1, 6]);
        assert_eq!(vinv.len(), 2);
        let (d, _) = smith_normal_form(vec![vec![4, 0, 0], vec![2, 2, 0], vec![0, 0, 4]]);
        let mut sorted = d.clone();
        sorted.sort();
        assert_eq!(d.iter().product::<i64>(), 32);
        assert_eq!(sorted, [2, 4, 4]);
    }

    #[test]
    fn bound_is_enforced() {
        let spec = discriminant(2_500_003).unwrap();
        assert_eq!(ClassGroup::new(&spec).unwrap_err(), QuadError::BoundExceeded(10_000_012));
    }
}
