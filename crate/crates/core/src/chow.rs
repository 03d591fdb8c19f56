//! Finite cohomology-ring models with exact integration.
//!
//! Every model is a tower of monic extensions: generator `g_k` satisfies one
//! relation `g_k^{e_k} = (polynomial in g_1..g_k of lower g_k-degree)`.
//! Rewriting the largest offending generator first terminates, and the
//! monomials with every `exp_k < e_k` form a basis, so normal forms are
//! unique. Points, projective spaces, products and projective bundles
//! `P(N + O)` all have presentations of this shape.
//!
//! All generators are divisor classes (complex degree 1).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::symcalc::{self, ChernSeries};
use crate::{Error, Result};

type Monomial = Vec<u32>;
type Poly = BTreeMap<Monomial, Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// `g^power = tail`
#[derive(Debug, Clone)]
struct Relation {
    power: u32,
    tail: Poly,
}

#[derive(Debug, Clone)]
struct BundleData {
    base: Arc<RingModel>,
    fiber_dim: usize,
}

/// A graded ring presentation with an integration functional and the total
/// Chern class of the tangent bundle.
#[derive(Debug, Clone)]
pub struct RingModel {
    name: String,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
    dim: usize,
    integration: Poly,
    tangent: Poly,
    bundle: Option<BundleData>,
}

/// A cohomology class of a model, stored in normal form.
#[derive(Clone)]
pub struct CohClass {
    model: Arc<RingModel>,
    terms: Poly,
}

fn add_into(poly: &mut Poly, mono: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match poly.entry(mono) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += c;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

fn pad(mono: &[u32], before: usize, after: usize) -> Monomial {
    let mut out = vec![0; before];
    out.extend_from_slice(mono);
    out.extend(std::iter::repeat_n(0, after));
    out
}

fn pad_poly(poly: &Poly, before: usize, after: usize) -> Poly {
    poly.iter()
        .map(|(m, c)| (pad(m, before, after), c.clone()))
        .collect()
}

impl RingModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    fn degree(&self, mono: &[u32]) -> usize {
        mono.iter()
            .zip(&self.generators)
            .map(|(&e, g)| e as usize * g.degree as usize)
            .sum()
    }

    /// Rewrites to normal form, dropping everything above the top degree.
    fn reduce(&self, poly: Poly) -> Poly {
        let mut out = Poly::new();
        let mut work: Vec<(Monomial, Rational)> = poly.into_iter().collect();
        while let Some((mono, c)) = work.pop() {
            if c.is_zero() || self.degree(&mono) > self.dim {
                continue;
            }
            let overflow = (0..self.generators.len())
                .rev()
                .find(|&k| mono[k] >= self.relations[k].power);
            match overflow {
                None => add_into(&mut out, mono, c),
                Some(k) => {
                    let mut rest = mono;
                    rest[k] -= self.relations[k].power;
                    for (t, tc) in &self.relations[k].tail {
                        let next = rest.iter().zip(t).map(|(a, b)| a + b).collect();
                        work.push((next, &c * tc));
                    }
                }
            }
        }
        out
    }

    fn mul_poly(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (ma, ca) in a {
            let da = self.degree(ma);
            for (mb, cb) in b {
                if da + self.degree(mb) > self.dim {
                    continue;
                }
                add_into(&mut out, ma.iter().zip(mb).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        self.reduce(out)
    }

    /// The monomial basis, sorted by degree then exponents.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Monomial> = vec![vec![]];
        for rel in &self.relations {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..rel.power).map(move |e| {
                        let mut next = m.clone();
                        next.push(e);
                        next
                    })
                })
                .collect();
        }
        out.sort_by_key(|m| (self.degree(m), m.clone()));
        out
    }

    /// The fiber dimension when this model is a projective bundle.
    pub fn fiber_dim(&self) -> Option<usize> {
        self.bundle.as_ref().map(|b| b.fiber_dim)
    }

    pub fn bundle_base(&self) -> Option<&Arc<RingModel>> {
        self.bundle.as_ref().map(|b| &b.base)
    }
}

/// Accessors that hand out classes need the shared handle.
pub trait ModelHandle {
    fn one(&self) -> CohClass;
    fn constant(&self, c: Rational) -> CohClass;
    /// The `i`-th generator as a class.
    fn generator(&self, i: usize) -> CohClass;
    /// Total Chern class of the tangent bundle.
    fn tangent_chern(&self) -> CohClass;
    /// `c_k` of the tangent bundle.
    fn chern_class(&self, k: usize) -> CohClass;
    /// Builds a class from raw `(exponents, coefficient)` terms.
    fn class_from_terms(&self, terms: Vec<(Vec<u32>, Rational)>) -> Result<CohClass>;
}

impl ModelHandle for Arc<RingModel> {
    fn one(&self) -> CohClass {
        self.constant(Rational::one())
    }

    fn constant(&self, c: Rational) -> CohClass {
        let mut terms = Poly::new();
        add_into(&mut terms, vec![0; self.generators.len()], c);
        CohClass {
            model: Arc::clone(self),
            terms,
        }
    }

    fn generator(&self, i: usize) -> CohClass {
        assert!(i < self.generators.len(), "generator index out of range");
        let mut mono = vec![0; self.generators.len()];
        mono[i] = 1;
        let mut terms = Poly::new();
        add_into(&mut terms, mono, Rational::one());
        CohClass {
            model: Arc::clone(self),
            terms: self.reduce(terms),
        }
    }

    fn tangent_chern(&self) -> CohClass {
        CohClass {
            model: Arc::clone(self),
            terms: self.tangent.clone(),
        }
    }

    fn chern_class(&self, k: usize) -> CohClass {
        self.tangent_chern().degree_part(k)
    }

    fn class_from_terms(&self, terms: Vec<(Vec<u32>, Rational)>) -> Result<CohClass> {
        let mut poly = Poly::new();
        for (mono, c) in terms {
            if mono.len() != self.generators.len() {
                return Err(Error::InvalidModel(format!(
                    "monomial {mono:?} does not match {} generators",
                    self.generators.len()
                )));
            }
            add_into(&mut poly, mono, c);
        }
        Ok(CohClass {
            model: Arc::clone(self),
            terms: self.reduce(poly),
        })
    }
}

impl CohClass {
    pub fn model(&self) -> &Arc<RingModel> {
        &self.model
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_model(&self, other: &CohClass) {
        assert!(
            Arc::ptr_eq(&self.model, &other.model),
            "classes belong to different models"
        );
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        self.same_model(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m.clone(), c.clone());
        }
        CohClass {
            model: Arc::clone(&self.model),
            terms,
        }
    }

    pub fn sub(&self, other: &CohClass) -> CohClass {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> CohClass {
        let mut terms = Poly::new();
        for (m, v) in &self.terms {
            add_into(&mut terms, m.clone(), v * c);
        }
        CohClass {
            model: Arc::clone(&self.model),
            terms,
        }
    }

    pub fn mul(&self, other: &CohClass) -> CohClass {
        self.same_model(other);
        CohClass {
            model: Arc::clone(&self.model),
            terms: self.model.mul_poly(&self.terms, &other.terms),
        }
    }

    pub fn pow(&self, e: u32) -> CohClass {
        let mut acc = self.model.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The component of degree `k`.
    pub fn degree_part(&self, k: usize) -> CohClass {
        CohClass {
            model: Arc::clone(&self.model),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.model.degree(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.model.generators.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `exp(self)`, e.g. the Chern character of a line bundle with first
    /// Chern class `self`. The constant term must vanish.
    pub fn exp(&self) -> Result<CohClass> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain(
                "exp of a class with nonzero degree-0 part".into(),
            ));
        }
        let mut acc = self.model.one();
        let mut power = self.model.one();
        for n in 1..=self.model.dim as u32 {
            power = power.mul(self);
            acc = acc.add(&power.scale(&rational::factorial(n).recip()));
        }
        Ok(acc)
    }
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.model, &other.model) && self.terms == other.terms
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass[{}]({self})", self.model.name)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (self.model.degree(m), std::cmp::Reverse((*m).clone())));
        for (i, (mono, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let body: Vec<String> = mono
                .iter()
                .zip(&self.model.generators)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, g)| {
                    if e == 1 {
                        g.name.clone()
                    } else {
                        format!("{}^{e}", g.name)
                    }
                })
                .collect();
            if body.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", body.join("*"))?;
            } else {
                write!(f, "{c}*{}", body.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The one-point model.
pub fn point() -> Arc<RingModel> {
    let mut integration = Poly::new();
    integration.insert(vec![], Rational::one());
    let mut tangent = Poly::new();
    tangent.insert(vec![], Rational::one());
    Arc::new(RingModel {
        name: "point".into(),
        generators: vec![],
        relations: vec![],
        dim: 0,
        integration,
        tangent,
        bundle: None,
    })
}

/// `Q[h]/(h^{n+1})` with `int h^n = 1` and `c(T) = (1 + h)^{n+1}`.
pub fn projective_space(n: usize) -> Arc<RingModel> {
    let mut integration = Poly::new();
    integration.insert(vec![n as u32], Rational::one());
    let tangent = (0..=n)
        .map(|k| {
            (
                vec![k as u32],
                Rational::from_integer(rational::binomial(n as u64 + 1, k as u64)),
            )
        })
        .collect();
    Arc::new(RingModel {
        name: format!("CP{n}"),
        generators: vec![Generator {
            name: "h".into(),
            degree: 1,
        }],
        relations: vec![Relation {
            power: n as u32 + 1,
            tail: Poly::new(),
        }],
        dim: n,
        integration,
        tangent,
        bundle: None,
    })
}

/// The product model: tensor-product ring, multiplicative integration and
/// Whitney product of tangent classes.
pub fn product(a: &Arc<RingModel>, b: &Arc<RingModel>) -> Arc<RingModel> {
    let (la, lb) = (a.generators.len(), b.generators.len());
    let mut generators = a.generators.clone();
    for g in &b.generators {
        let mut name = g.name.clone();
        while generators.iter().any(|x| x.name == name) {
            name.push('\'');
        }
        generators.push(Generator {
            name,
            degree: g.degree,
        });
    }
    let relations = a
        .relations
        .iter()
        .map(|r| Relation {
            power: r.power,
            tail: pad_poly(&r.tail, 0, lb),
        })
        .chain(b.relations.iter().map(|r| Relation {
            power: r.power,
            tail: pad_poly(&r.tail, la, 0),
        }))
        .collect();
    let mut integration = Poly::new();
    for (ma, va) in &a.integration {
        for (mb, vb) in &b.integration {
            let mut m = ma.clone();
            m.extend_from_slice(mb);
            add_into(&mut integration, m, va * vb);
        }
    }
    let mut model = RingModel {
        name: format!("{}x{}", a.name, b.name),
        generators,
        relations,
        dim: a.dim + b.dim,
        integration,
        tangent: Poly::new(),
        bundle: None,
    };
    model.tangent = model.mul_poly(&pad_poly(&a.tangent, 0, lb), &pad_poly(&b.tangent, la, 0));
    Arc::new(model)
}

/// Total Chern class `prod (1 + L_i)` of a sum of line bundles with first
/// Chern classes `lines`.
pub fn split_bundle_chern(base: &Arc<RingModel>, lines: &[CohClass]) -> Result<CohClass> {
    let mut acc = base.one();
    for l in lines {
        if !Arc::ptr_eq(l.model(), base) {
            return Err(Error::InvalidModel(
                "line class belongs to another model".into(),
            ));
        }
        if l.terms.keys().any(|m| base.degree(m) != 1) {
            return Err(Error::InvalidModel(format!(
                "`{l}` is not a degree-1 class"
            )));
        }
        acc = acc.mul(&base.one().add(l));
    }
    Ok(acc)
}

/// `X = P(N + O)` over `base`, with `N` of rank `rank` and total Chern class
/// `chern_n`.
///
/// The new generator `xi` restricts to the hyperplane class of each fiber
/// `CP^rank` and satisfies `sum_i c_i(N + O) xi^{rank+1-i} = 0`, so that
/// `int_fiber xi^rank = 1`. The tangent class is `c(T_rel) * c(T_base)` with
/// `c(T_rel) = sum_i c_i(N) (1 + xi)^{rank+1-i}`.
pub fn projective_bundle(
    base: &Arc<RingModel>,
    chern_n: &CohClass,
    rank: usize,
) -> Result<Arc<RingModel>> {
    if rank == 0 {
        return Err(Error::InvalidModel("bundle rank must be at least 1".into()));
    }
    if !Arc::ptr_eq(chern_n.model(), base) {
        return Err(Error::InvalidModel(
            "Chern class does not live on the base model".into(),
        ));
    }
    if !chern_n.constant_term().is_one() {
        return Err(Error::InvalidModel(format!(
            "total Chern class `{chern_n}` must have degree-0 part 1"
        )));
    }
    if let Some(bad) = chern_n.terms.keys().find(|m| base.degree(m) > rank) {
        return Err(Error::InvalidModel(format!(
            "total Chern class has a component in degree {} above the rank {rank}",
            base.degree(bad)
        )));
    }

    let k = base.generators.len();
    let lift = |poly: &Poly, xi: u32| -> Poly {
        poly.iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m.push(xi);
                (m, c.clone())
            })
            .collect()
    };

    let mut name = "xi".to_string();
    while base.generators.iter().any(|g| g.name == name) {
        name.push('\'');
    }
    let mut generators = base.generators.clone();
    generators.push(Generator { name, degree: 1 });

    let mut relations: Vec<Relation> = base
        .relations
        .iter()
        .map(|r| Relation {
            power: r.power,
            tail: lift(&r.tail, 0),
        })
        .collect();
    // xi^{r+1} = -sum_{i>=1} c_i(N) xi^{r+1-i}
    let mut tail = Poly::new();
    for i in 1..=rank {
        for (m, c) in chern_n.degree_part(i).terms() {
            let mut m = m.clone();
            m.push((rank + 1 - i) as u32);
            add_into(&mut tail, m, -c.clone());
        }
    }
    relations.push(Relation {
        power: rank as u32 + 1,
        tail,
    });

    let integration = lift(&base.integration, rank as u32);

    let mut model = RingModel {
        name: format!("P({}; rank {rank})", base.name),
        generators,
        relations,
        dim: base.dim + rank,
        integration,
        tangent: Poly::new(),
        bundle: Some(BundleData {
            base: Arc::clone(base),
            fiber_dim: rank,
        }),
    };

    // c(T_rel) = sum_i c_i(N) (1 + xi)^{rank+1-i}
    let mut one_plus_xi = Poly::new();
    add_into(&mut one_plus_xi, vec![0; k + 1], Rational::one());
    let mut xi_mono = vec![0; k + 1];
    xi_mono[k] = 1;
    add_into(&mut one_plus_xi, xi_mono, Rational::one());
    let mut relative = Poly::new();
    for i in 0..=rank {
        let ci = lift(&chern_n.degree_part(i).terms, 0);
        let mut factor = ci;
        for _ in 0..(rank + 1 - i) {
            factor = model.mul_poly(&factor, &one_plus_xi);
        }
        for (m, c) in factor {
            add_into(&mut relative, m, c);
        }
    }
    model.tangent = model.mul_poly(&relative, &lift(&base.tangent, 0));
    Ok(Arc::new(model))
}

/// Pulls a base class back to a projective bundle over it.
pub fn pull_back(bundle: &Arc<RingModel>, class: &CohClass) -> Result<CohClass> {
    let base = bundle
        .bundle_base()
        .ok_or_else(|| Error::InvalidModel(format!("{} is not a projective bundle", bundle.name)))?;
    if !Arc::ptr_eq(base, class.model()) {
        return Err(Error::InvalidModel("class does not live on the bundle base".into()));
    }
    let terms = class
        .terms
        .iter()
        .map(|(m, c)| (pad(m, 0, 1), c.clone()))
        .collect();
    Ok(CohClass {
        model: Arc::clone(bundle),
        terms,
    })
}

/// Push-forward along the bundle projection: the coefficient of `xi^r`.
pub fn fiber_integrate(class: &CohClass) -> Result<CohClass> {
    let model = class.model();
    let data = model
        .bundle
        .as_ref()
        .ok_or_else(|| Error::InvalidModel(format!("{} is not a projective bundle", model.name)))?;
    let last = model.generators.len() - 1;
    let mut terms = Poly::new();
    for (m, c) in &class.terms {
        if m[last] as usize == data.fiber_dim {
            add_into(&mut terms, m[..last].to_vec(), c.clone());
        }
    }
    Ok(CohClass {
        model: Arc::clone(&data.base),
        terms,
    })
}

/// `int_X c`; zero when `c` has no top-degree component.
pub fn integrate(class: &CohClass) -> Rational {
    class
        .terms
        .iter()
        .filter_map(|(m, c)| class.model.integration.get(m).map(|v| c * v))
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// `int c_n(TX)`; an error unless the result is an integer.
pub fn euler_characteristic(model: &Arc<RingModel>) -> Result<Rational> {
    let chi = integrate(&model.chern_class(model.dim));
    if !chi.is_integer() {
        return Err(Error::ModelInconsistency(format!(
            "Euler characteristic of {} came out as {chi}",
            model.name
        )));
    }
    Ok(chi)
}

/// `m chi(Y) + int c_1 c_{m-1}` for `m = dim Y`; zero for a point.
pub fn adiabatic_coefficient(model: &Arc<RingModel>) -> Result<Rational> {
    let m = model.dim;
    if m == 0 {
        return Ok(Rational::zero());
    }
    let chi = euler_characteristic(model)?;
    let c1_cm1 = integrate(&model.chern_class(1).mul(&model.chern_class(m - 1)));
    Ok(rational::int(m as i64) * chi + c1_cm1)
}

/// Evaluates a universal polynomial in `c_1..c_m` at the classes
/// `chern[0..m]`.
pub fn evaluate_chern_series(
    model: &Arc<RingModel>,
    series: &ChernSeries,
    chern: &[CohClass],
) -> CohClass {
    assert_eq!(series.num_roots(), chern.len(), "one class per Chern root count");
    let mut powers: Vec<Vec<CohClass>> = chern.iter().map(|c| vec![model.one(), c.clone()]).collect();
    let mut out = model.constant(Rational::zero());
    for (mono, coeff) in series.terms() {
        let mut term = model.one();
        for (k, &e) in mono.iter().enumerate() {
            let e = e as usize;
            while powers[k].len() <= e {
                let next = powers[k].last().unwrap().mul(&chern[k]);
                powers[k].push(next);
            }
            term = term.mul(&powers[k][e]);
        }
        out = out.add(&term.scale(coeff));
    }
    out
}

fn tangent_chern_classes(model: &Arc<RingModel>) -> Vec<CohClass> {
    (1..=model.dim).map(|k| model.chern_class(k)).collect()
}

/// `Td(TX)`, the universal Todd series evaluated at the tangent Chern classes.
pub fn todd_class(model: &Arc<RingModel>) -> CohClass {
    if model.dim == 0 {
        return model.one();
    }
    let td = symcalc::todd(model.dim, model.dim).expect("dim >= 1");
    evaluate_chern_series(model, &td, &tangent_chern_classes(model))
}

/// `ch(Lambda^p T*X)`, from the universal exterior-power character.
pub fn ch_cotangent_power(model: &Arc<RingModel>, p: usize) -> Result<CohClass> {
    if p > model.dim {
        return Err(Error::Domain(format!(
            "form degree {p} exceeds dimension {}",
            model.dim
        )));
    }
    if model.dim == 0 {
        return Ok(model.one());
    }
    let ch = symcalc::ch_exterior(model.dim, p, model.dim)?;
    Ok(evaluate_chern_series(model, &ch, &tangent_chern_classes(model)))
}

/// `chi(X, E) = int Td(TX) ch(E)`.
pub fn hrr_chi(model: &Arc<RingModel>, ch_sheaf: &CohClass) -> Result<Rational> {
    if !Arc::ptr_eq(model, ch_sheaf.model()) {
        return Err(Error::InvalidModel(
            "Chern character belongs to another model".into(),
        ));
    }
    let rank = ch_sheaf.constant_term();
    if !rank.is_integer() {
        return Err(Error::Domain(format!(
            "degree-0 part {rank} of the Chern character is not an integer rank"
        )));
    }
    Ok(integrate(&todd_class(model).mul(ch_sheaf)))
}

/// `chi(CP^n, Omega^p (s))` through Riemann-Roch.
pub fn chi_twisted_hodge(n: usize, p: usize, s: i64) -> Result<Rational> {
    if p > n {
        return Err(Error::Domain(format!("need 0 <= p <= n, got p={p}, n={n}")));
    }
    let model = projective_space(n);
    let twist = model.generator(0).scale(&rational::int(s)).exp()?;
    let ch = ch_cotangent_power(&model, p)?.mul(&twist);
    hrr_chi(&model, &ch)
}

/// `chi(CP^n, O(k)) = C(n + k, n)` as a polynomial in `k`, valid for every
/// integer `k`.
pub fn chi_line_bundle_closed_form(n: usize, k: i64) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, i| {
        acc * rational::int(k + i) / rational::int(i)
    })
}

/// `chi(CP^n, Omega^p (s))` from the Euler sequence
/// `0 -> Omega^p -> Lambda^p(O(-1)^{n+1}) -> Omega^{p-1} -> 0`, giving
/// `chi(Omega^p(s)) = C(n+1, p) chi(O(s-p)) - chi(Omega^{p-1}(s))`.
pub fn chi_twisted_hodge_euler_sequence(n: usize, p: usize, s: i64) -> Result<Rational> {
    if p > n {
        return Err(Error::Domain(format!("need 0 <= p <= n, got p={p}, n={n}")));
    }
    let mut chi = chi_line_bundle_closed_form(n, s);
    for q in 1..=p {
        let wedge = Rational::from_integer(rational::binomial(n as u64 + 1, q as u64));
        chi = wedge * chi_line_bundle_closed_form(n, s - q as i64) - chi;
    }
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn projective_plane_tangent_class() {
        let cp2 = projective_space(2);
        assert_eq!(cp2.tangent_chern().to_string(), "1 + 3*h + 3*h^2");
        assert_eq!(euler_characteristic(&cp2).unwrap(), int(3));
        assert_eq!(euler_characteristic(&projective_space(3)).unwrap(), int(4));
    }

    #[test]
    fn point_model() {
        let pt = point();
        assert_eq!(integrate(&pt.one()), int(1));
        assert_eq!(euler_characteristic(&pt).unwrap(), int(1));
        assert_eq!(adiabatic_coefficient(&pt).unwrap(), int(0));
        assert_eq!(hrr_chi(&pt, &pt.one()).unwrap(), int(1));
    }

    #[test]
    fn integrals_on_cp3() {
        let cp3 = projective_space(3);
        let c1c2 = cp3.chern_class(1).mul(&cp3.chern_class(2));
        assert_eq!(integrate(&c1c2), int(24));
        for k in 0..3 {
            assert_eq!(integrate(&cp3.generator(0).pow(k)), int(0));
        }
        assert_eq!(adiabatic_coefficient(&cp3).unwrap(), int(36));
        assert_eq!(adiabatic_coefficient(&projective_space(1)).unwrap(), int(4));
    }

    #[test]
    fn products_multiply() {
        let p1 = projective_space(1);
        let p1p1 = product(&p1, &p1);
        assert_eq!(euler_characteristic(&p1p1).unwrap(), int(4));
        assert_eq!(p1p1.generators()[1].name, "h'");
        let x = product(&projective_space(2), &point());
        assert_eq!(x.dim(), 2);
        assert_eq!(euler_characteristic(&x).unwrap(), int(3));
        // c = (1+2a)(1+3b+3b^2): c1 = 2a+3b, c2 = 6ab+3b^2, c1 c2 = 24 ab^2
        let p1p2 = product(&p1, &projective_space(2));
        let v = integrate(&p1p2.chern_class(1).mul(&p1p2.chern_class(2)));
        assert_eq!(v, int(24));
    }

    #[test]
    fn bundle_over_point_is_projective_space() {
        let pt = point();
        for r in 1..=4 {
            let x = projective_bundle(&pt, &pt.one(), r).unwrap();
            let cp = projective_space(r);
            assert_eq!(euler_characteristic(&x).unwrap(), int(r as i64 + 1));
            for k in 0..=r {
                let a = integrate(&x.chern_class(k).mul(&x.generator(0).pow((r - k) as u32)));
                let b = integrate(&cp.chern_class(k).mul(&cp.generator(0).pow((r - k) as u32)));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn hirzebruch_surface() {
        let p1 = projective_space(1);
        let trivial = projective_bundle(&p1, &p1.one(), 1).unwrap();
        assert_eq!(euler_characteristic(&trivial).unwrap(), int(4));
        let o1 = split_bundle_chern(&p1, &[p1.generator(0)]).unwrap();
        let f1 = projective_bundle(&p1, &o1, 1).unwrap();
        assert_eq!(euler_characteristic(&f1).unwrap(), int(4));
        // Noether: chi(O) = (c1^2 + c2)/12 = 1 for a rational surface
        assert_eq!(hrr_chi(&f1, &f1.one()).unwrap(), int(1));
        let c1 = f1.chern_class(1);
        assert_eq!(integrate(&c1.mul(&c1)), int(8));
    }

    #[test]
    fn fiber_integration_degrees() {
        let p1 = projective_space(1);
        let x = projective_bundle(&p1, &split_bundle_chern(&p1, &[p1.generator(0).scale(&int(2))]).unwrap(), 1).unwrap();
        let xi = x.generator(1);
        assert!(fiber_integrate(&x.one()).unwrap().is_zero());
        assert_eq!(fiber_integrate(&xi).unwrap(), p1.one());
        // xi^2 = -c_1(N) xi pushes forward to -c_1(N)
        assert_eq!(
            fiber_integrate(&xi.pow(2)).unwrap(),
            p1.generator(0).scale(&int(-2))
        );
        assert!(fiber_integrate(&p1.one()).is_err());
    }

    #[test]
    fn malformed_bundle_data_rejected() {
        let p1 = projective_space(1);
        let cp2 = projective_space(2);
        assert!(projective_bundle(&p1, &p1.constant(int(2)), 1).is_err());
        assert!(projective_bundle(&p1, &cp2.one(), 1).is_err());
        assert!(projective_bundle(&p1, &p1.one(), 0).is_err());
        let p2 = projective_space(2);
        let too_high = p2.one().add(&p2.generator(0).pow(2));
        assert!(projective_bundle(&p2, &too_high, 1).is_err());
    }

    #[test]
    fn riemann_roch_on_projective_space() {
        let cp2 = projective_space(2);
        let o1 = cp2.generator(0).exp().unwrap();
        assert_eq!(hrr_chi(&cp2, &o1).unwrap(), int(3));
        assert_eq!(chi_twisted_hodge(2, 1, 1).unwrap(), int(0));
        assert_eq!(chi_twisted_hodge(2, 1, 0).unwrap(), int(-1));
        assert!(chi_twisted_hodge(2, 3, 0).is_err());
        assert!(hrr_chi(&cp2, &cp2.constant(Rational::new(1.into(), 2.into()))).is_err());
    }

    #[test]
    fn euler_sequence_route_matches_small_cases() {
        assert_eq!(chi_twisted_hodge_euler_sequence(2, 1, 1).unwrap(), int(0));
        assert_eq!(chi_twisted_hodge_euler_sequence(2, 1, 0).unwrap(), int(-1));
        assert_eq!(chi_twisted_hodge_euler_sequence(3, 3, 0).unwrap(), int(-1));
        assert_eq!(chi_line_bundle_closed_form(2, -1), int(0));
        assert_eq!(chi_line_bundle_closed_form(2, -3), int(1));
    }
}
