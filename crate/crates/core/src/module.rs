//! Free bigraded `M2`-modules, homogeneous elements, and graded maps between
//! them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::ring::{m2_dim, Bidegree, M2Elem, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub label: String,
    pub deg: Bidegree,
}

impl Generator {
    pub fn new(label: impl Into<String>, deg: Bidegree) -> Self {
        Self {
            label: label.into(),
            deg,
        }
    }
}

/// A free module `M2<g_1, ..., g_n>` with an ordered list of labeled
/// generators. Order is significant: matrices and reports follow it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeModule {
    gens: Vec<Generator>,
}

impl FreeModule {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &gens {
            if !seen.insert(g.label.as_str()) {
                return Err(Error::DuplicateLabel(g.label.clone()));
            }
        }
        Ok(Self { gens })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.label == label)
    }

    pub fn get(&self, label: &str) -> Option<&Generator> {
        self.gens.iter().find(|g| g.label == label)
    }

    pub fn degree_of(&self, label: &str) -> Result<Bidegree> {
        self.get(label)
            .map(|g| g.deg)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn degrees(&self) -> Vec<Bidegree> {
        self.gens.iter().map(|g| g.deg).collect()
    }

    /// `dim_F2` of the module in bidegree `(p, q)`.
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.gens
            .iter()
            .map(|g| m2_dim(p - g.deg.p, q - g.deg.q))
            .sum()
    }

    /// The `F2` basis of the `(p, q)` slice: one vector `m * g` for every
    /// generator `g` with `M2` nonzero in `(p, q) - deg(g)`.
    pub fn slice_basis(&self, p: i64, q: i64) -> Vec<(usize, Monomial)> {
        self.gens
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                Monomial::at(Bidegree::new(p, q) - g.deg).map(|m| (i, m))
            })
            .collect()
    }

    pub(crate) fn push(&mut self, g: Generator) -> Result<()> {
        if self.get(&g.label).is_some() {
            return Err(Error::DuplicateLabel(g.label));
        }
        self.gens.push(g);
        Ok(())
    }
}

/// `dim_F2` of `module` in bidegree `(p, q)`.
pub fn mod_dim(module: &FreeModule, p: i64, q: i64) -> usize {
    module.dim(p, q)
}

/// A homogeneous element `sum c_i g_i` of a free module. Only nonzero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElem {
    deg: Bidegree,
    coeffs: BTreeMap<String, Monomial>,
}

impl ModuleElem {
    pub fn zero(deg: Bidegree) -> Self {
        Self {
            deg,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis element `g` itself.
    pub fn generator(home: &FreeModule, label: &str) -> Result<Self> {
        let deg = home.degree_of(label)?;
        Ok(Self {
            deg,
            coeffs: BTreeMap::from([(label.to_owned(), Monomial::ONE)]),
        })
    }

    /// Builds a homogeneous element of `home` in bidegree `deg`, summing
    /// repeated labels over `F2`.
    pub fn new<'a>(
        home: &FreeModule,
        deg: Bidegree,
        terms: impl IntoIterator<Item = (&'a str, M2Elem)>,
    ) -> Result<Self> {
        let mut x = Self::zero(deg);
        for (label, c) in terms {
            x.add_term(home, label, c)?;
        }
        Ok(x)
    }

    pub fn deg(&self) -> Bidegree {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, label: &str) -> M2Elem {
        self.coeffs.get(label).copied().into()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, Monomial)> {
        self.coeffs.iter().map(|(l, &m)| (l.as_str(), m))
    }

    /// Adds `c * label` in place, checking homogeneity against `home`.
    pub fn add_term(&mut self, home: &FreeModule, label: &str, c: M2Elem) -> Result<()> {
        let Some(m) = c.monomial() else {
            return Ok(());
        };
        let gdeg = home.degree_of(label)?;
        if m.bidegree() + gdeg != self.deg {
            return Err(Error::DegreeMismatch(format!(
                "{m}*{label} has bidegree {}, expected {}",
                m.bidegree() + gdeg,
                self.deg
            )));
        }
        match self.coeffs.get(label) {
            // Same bidegree and dim <= 1, so the two monomials coincide.
            Some(_) => {
                self.coeffs.remove(label);
            }
            None => {
                self.coeffs.insert(label.to_owned(), m);
            }
        }
        Ok(())
    }

    pub fn add(&self, home: &FreeModule, other: &ModuleElem) -> Result<ModuleElem> {
        if self.deg != other.deg && !other.is_zero() && !self.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "cannot add elements of bidegrees {} and {}",
                self.deg, other.deg
            )));
        }
        let mut out = if self.is_zero() {
            ModuleElem::zero(other.deg)
        } else {
            self.clone()
        };
        for (l, m) in other.terms() {
            out.add_term(home, l, m.into())?;
        }
        Ok(out)
    }

    /// Checks that every label exists in `home` and every term is homogeneous.
    pub fn check_in(&self, home: &FreeModule) -> Result<()> {
        for (label, m) in self.terms() {
            let gdeg = home.degree_of(label)?;
            if m.bidegree() + gdeg != self.deg {
                return Err(Error::DegreeMismatch(format!(
                    "term {m}*{label} is not in bidegree {}",
                    self.deg
                )));
            }
        }
        Ok(())
    }

    /// Coordinates with respect to `home.slice_basis(deg)`.
    pub fn coordinates(&self, home: &FreeModule) -> Vec<bool> {
        home.slice_basis(self.deg.p, self.deg.q)
            .into_iter()
            .map(|(i, _)| self.coeffs.contains_key(&home.gens()[i].label))
            .collect()
    }

    /// Whether `theta` times this element is nonzero.
    pub fn is_theta_survivor(&self) -> bool {
        self.coeffs.values().any(|m| m.is_one())
    }
}

impl fmt::Display for ModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (label, m)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{m}*{label}")?;
            }
        }
        Ok(())
    }
}

/// A degree-homogeneous `M2`-linear map. The image of a source generator `g`
/// is `sum_nu entry(g, nu) * nu`, homogeneous of bidegree `deg(g) + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: FreeModule,
    target: FreeModule,
    shift: Bidegree,
    entries: BTreeMap<(String, String), Monomial>,
}

impl GradedMap {
    pub fn new(
        source: FreeModule,
        target: FreeModule,
        shift: Bidegree,
        entries: impl IntoIterator<Item = ((String, String), M2Elem)>,
    ) -> Result<Self> {
        let mut map = Self::zero(source, target, shift);
        for ((s, t), c) in entries {
            map.set(&s, &t, c)?;
        }
        Ok(map)
    }

    pub fn zero(source: FreeModule, target: FreeModule, shift: Bidegree) -> Self {
        Self {
            source,
            target,
            shift,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(module: &FreeModule) -> Self {
        let mut map = Self::zero(module.clone(), module.clone(), Bidegree::default());
        for g in module.gens() {
            map.entries
                .insert((g.label.clone(), g.label.clone()), Monomial::ONE);
        }
        map
    }

    /// Sets one entry, enforcing `bidegree(e) = deg(src) + shift - deg(tgt)`.
    pub fn set(&mut self, src: &str, tgt: &str, c: M2Elem) -> Result<()> {
        let sdeg = self.source.degree_of(src)?;
        let tdeg = self.target.degree_of(tgt)?;
        let key = (src.to_owned(), tgt.to_owned());
        match c.monomial() {
            None => {
                self.entries.remove(&key);
            }
            Some(m) => {
                let want = sdeg + self.shift - tdeg;
                if m.bidegree() != want {
                    return Err(Error::DegreeMismatch(format!(
                        "entry {m} for ({src}, {tgt}) has bidegree {}, expected {want}",
                        m.bidegree()
                    )));
                }
                self.entries.insert(key, m);
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn shift(&self) -> Bidegree {
        self.shift
    }

    pub fn entry(&self, src: &str, tgt: &str) -> M2Elem {
        self.entries
            .get(&(src.to_owned(), tgt.to_owned()))
            .copied()
            .into()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, Monomial)> {
        self.entries
            .iter()
            .map(|((s, t), &m)| (s.as_str(), t.as_str(), m))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Image of the source generator `label`.
    pub fn image(&self, label: &str) -> Result<ModuleElem> {
        let x = ModuleElem::generator(&self.source, label)?;
        self.apply(&x)
    }

    pub fn apply(&self, x: &ModuleElem) -> Result<ModuleElem> {
        x.check_in(&self.source)?;
        let mut out = ModuleElem::zero(x.deg() + self.shift);
        for (src, c) in x.terms() {
            for (s, t, e) in self.entries() {
                if s == src {
                    let prod = crate::ring::m2_mul(c.into(), e.into());
                    out.add_term(&self.target, t, prod)?;
                }
            }
        }
        Ok(out)
    }

    /// The `F2`-linear map from the `(p, q)` slice of the source to the
    /// `(p, q) + shift` slice of the target, in slice-basis coordinates.
    pub fn matrix_at(&self, p: i64, q: i64) -> BitMatrix {
        let cols = self.source.slice_basis(p, q);
        let out = Bidegree::new(p, q) + self.shift;
        let rows = self.target.slice_basis(out.p, out.q);
        let mut m = BitMatrix::zeros(rows.len(), cols.len());
        for (j, &(si, sm)) in cols.iter().enumerate() {
            let src = &self.source.gens()[si].label;
            for (i, &(ti, _)) in rows.iter().enumerate() {
                let tgt = &self.target.gens()[ti].label;
                let e = self.entry(src, tgt);
                if !crate::ring::m2_mul(sm.into(), e).is_zero() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }
}

/// `g . f`: first `f`, then `g`. Shifts add.
pub fn compose_change(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    if f.target != g.source {
        return Err(Error::DegreeMismatch(
            "composition requires f.target = g.source".into(),
        ));
    }
    let mut out = GradedMap::zero(f.source.clone(), g.target.clone(), f.shift + g.shift);
    for a in f.source.gens() {
        let image = f.image(&a.label)?;
        let image = g.apply(&image)?;
        for (c, m) in image.terms() {
            out.set(&a.label, c, m.into())?;
        }
    }
    Ok(out)
}

/// A graded map of shift `(1,0)` into a rank-one module `M2<nu>`: the
/// connecting map for attaching a single cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential(GradedMap);

impl Differential {
    pub const SHIFT: Bidegree = Bidegree::new(1, 0);

    pub fn new(map: GradedMap) -> Result<Self> {
        if map.shift() != Self::SHIFT {
            return Err(Error::PreconditionViolated(format!(
                "differential must have shift (1,0), got {}",
                map.shift()
            )));
        }
        if map.target().rank() != 1 {
            return Err(Error::PreconditionViolated(format!(
                "differential target must have rank 1, got {}",
                map.target().rank()
            )));
        }
        Ok(Self(map))
    }

    /// Builds `d(g) = images[g] * nu` for the listed generators, zero elsewhere.
    pub fn from_images<'a>(
        source: &FreeModule,
        nu: Generator,
        images: impl IntoIterator<Item = (&'a str, M2Elem)>,
    ) -> Result<Self> {
        let target = FreeModule::new(vec![nu])?;
        let mut map = GradedMap::zero(source.clone(), target, Self::SHIFT);
        let nu_label = map.target().gens()[0].label.clone();
        for (label, c) in images {
            map.set(label, &nu_label, c)?;
        }
        Self::new(map)
    }

    pub fn map(&self) -> &GradedMap {
        &self.0
    }

    pub fn source(&self) -> &FreeModule {
        self.0.source()
    }

    pub fn nu(&self) -> &Generator {
        &self.0.target().gens()[0]
    }

    /// Coefficient of `nu` in `d(label)`.
    pub fn coefficient(&self, label: &str) -> M2Elem {
        self.0.entry(label, &self.nu().label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(gens: &[(&str, i64, i64)]) -> FreeModule {
        FreeModule::new(
            gens.iter()
                .map(|&(l, p, q)| Generator::new(l, Bidegree::new(p, q)))
                .collect(),
        )
        .unwrap()
    }

    fn m(s: &str) -> M2Elem {
        s.parse().unwrap()
    }

    #[test]
    fn mod_dim_examples() {
        let two = module(&[("a", 1, 1), ("b", 2, 1)]);
        assert_eq!(mod_dim(&two, 2, 1), 1);
        assert_eq!(mod_dim(&FreeModule::empty(), 3, -4), 0);
        assert_eq!(mod_dim(&module(&[("g", 0, 0)]), 0, -2), 1);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let gens = vec![
            Generator::new("x", Bidegree::new(0, 0)),
            Generator::new("x", Bidegree::new(1, 0)),
        ];
        assert_eq!(FreeModule::new(gens), Err(Error::DuplicateLabel("x".into())));
    }

    #[test]
    fn apply_examples() {
        let src = module(&[("g", 1, 0)]);
        let d = Differential::from_images(
            &src,
            Generator::new("nu", Bidegree::new(2, 2)),
            [("g", m("theta"))],
        )
        .unwrap();
        let nu = d.map().target().clone();
        let g = ModuleElem::generator(&src, "g").unwrap();
        let dg = d.map().apply(&g).unwrap();
        assert_eq!(dg, ModuleElem::new(&nu, Bidegree::new(2, 0), [("nu", m("theta"))]).unwrap());

        let rho2g = ModuleElem::new(&src, Bidegree::new(3, 2), [("g", m("rho^2"))]).unwrap();
        assert!(d.map().apply(&rho2g).unwrap().is_zero());

        // d(lambda) = tau nu, x = (theta/tau) lambda -> theta nu
        let lam = module(&[("l", 1, 3)]);
        let d = Differential::from_images(
            &lam,
            Generator::new("nu", Bidegree::new(2, 2)),
            [("l", m("tau"))],
        )
        .unwrap();
        let x = ModuleElem::new(&lam, Bidegree::new(1, 0), [("l", m("theta/(tau)"))]).unwrap();
        let y = d.map().apply(&x).unwrap();
        assert_eq!(y.coeff("nu"), m("theta"));
    }

    #[test]
    fn inhomogeneous_elements_rejected() {
        let src = module(&[("g", 1, 0), ("h", 2, 0)]);
        let err = ModuleElem::new(&src, Bidegree::new(1, 0), [("g", m("1")), ("h", m("1"))]);
        assert!(matches!(err, Err(Error::DegreeMismatch(_))));
        let d = Differential::from_images(
            &src,
            Generator::new("nu", Bidegree::new(2, 2)),
            [("g", m("tau"))],
        );
        assert!(matches!(d, Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn matrix_examples() {
        let src = module(&[("g", 1, 0)]);
        let d = Differential::from_images(
            &src,
            Generator::new("nu", Bidegree::new(2, 2)),
            [("g", m("theta"))],
        )
        .unwrap();
        let a = d.map().matrix_at(1, 0);
        assert_eq!((a.rows(), a.cols()), (1, 1));
        assert!(a.get(0, 0));
        // Source slice empty strictly between the cones of g.
        let z = d.map().matrix_at(2, 0);
        assert_eq!(z.cols(), 0);

        let one = module(&[("x", 3, 1)]);
        let other = module(&[("y", 3, 1)]);
        let iso = GradedMap::new(
            one,
            other,
            Bidegree::default(),
            [(("x".into(), "y".into()), M2Elem::ONE)],
        )
        .unwrap();
        let at = iso.matrix_at(3, 1);
        assert!(at.is_invertible() && at.rows() == 1);
    }

    #[test]
    fn substitution_is_self_inverse() {
        // chi_1 = gamma_1 + tau^2 lambda, applied twice is the identity over F2.
        let basis = module(&[("l", 2, 3), ("g1", 2, 5)]);
        let mut sub = GradedMap::identity(&basis);
        sub.set("g1", "l", m("tau^2")).unwrap();
        let twice = compose_change(&sub, &sub).unwrap();
        assert_eq!(twice, GradedMap::identity(&basis));
        let id = GradedMap::identity(&basis);
        assert_eq!(compose_change(&id, &sub).unwrap(), sub);
    }

    #[test]
    fn composition_of_unitriangular_maps_is_unitriangular() {
        let basis = module(&[("a", 0, 0), ("b", 1, 1), ("c", 1, 3)]);
        let mut f = GradedMap::identity(&basis);
        f.set("b", "a", m("rho")).unwrap();
        let mut g = GradedMap::identity(&basis);
        g.set("c", "b", m("tau^2")).unwrap();
        let h = compose_change(&g, &f).unwrap();
        for (i, x) in basis.gens().iter().enumerate() {
            assert_eq!(h.entry(&x.label, &x.label), M2Elem::ONE);
            for y in &basis.gens()[i + 1..] {
                assert_eq!(h.entry(&x.label, &y.label), M2Elem::Zero);
            }
        }
        assert_eq!(h.entry("c", "a"), m("rho*tau^2"));
    }

    #[test]
    fn differential_shape_enforced() {
        let src = module(&[("g", 1, 0)]);
        let two = module(&[("u", 2, 2), ("v", 2, 1)]);
        let map = GradedMap::zero(src.clone(), two, Bidegree::new(1, 0));
        assert!(Differential::new(map).is_err());
        let map = GradedMap::zero(src, module(&[("u", 2, 2)]), Bidegree::new(0, 0));
        assert!(Differential::new(map).is_err());
    }
}
