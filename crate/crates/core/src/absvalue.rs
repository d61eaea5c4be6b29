//! The abstract value lattice over every Skel type, generically lifted
//! from the instantiation's base domains: order, join, bottom/top, and
//! the concretisation decision procedure.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::ast::{AbsTerm, SkeletalSemantics, TypeExpr};
use crate::error::DomainError;
use crate::instantiation::{BaseLattice, Instantiation};
use crate::ppoint::ProgramPoint;
use crate::value::Value;

/// An abstract value, parameterized by the instantiation's abstract base
/// payloads.
///
/// Normal-form invariants, maintained by [`Domain::normalize`] and
/// preserved by every operation here:
/// - tuple-set members have no bottom components and no member is below
///   another (so structural equality decides lattice equality);
/// - a constructor never wraps bottom;
/// - `Bot`/`Top` only appear at types where they are the canonical
///   representation (empty sets stand for bottom at tuple, arrow and
///   program types; a base domain may own its top payload).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AbsValue<A> {
    Bot(TypeExpr),
    Top(TypeExpr),
    Constr(String, Box<AbsValue<A>>),
    Tuples(BTreeSet<Vec<AbsValue<A>>>),
    Closures(BTreeSet<AbsClosure<A>>),
    Base { ty: String, payload: A },
    Points(BTreeSet<ProgramPoint>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AbsClosure<A> {
    Named {
        name: String,
        arity: usize,
        collected: Vec<AbsValue<A>>,
    },
    Anon {
        lambda: Arc<AbsTerm>,
        env: AbsEnv<A>,
    },
}

pub type AbsEnv<A> = BTreeMap<String, AbsValue<A>>;

impl<A: Clone + Ord> AbsValue<A> {
    pub fn unit() -> AbsValue<A> {
        let mut set = BTreeSet::new();
        set.insert(Vec::new());
        AbsValue::Tuples(set)
    }

    pub fn base(ty: &str, payload: A) -> AbsValue<A> {
        AbsValue::Base { ty: ty.to_string(), payload }
    }

    pub fn singleton_tuple(components: Vec<AbsValue<A>>) -> AbsValue<A> {
        let mut set = BTreeSet::new();
        set.insert(components);
        AbsValue::Tuples(set)
    }

    pub fn singleton_closure(c: AbsClosure<A>) -> AbsValue<A> {
        let mut set = BTreeSet::new();
        set.insert(c);
        AbsValue::Closures(set)
    }

    pub fn point(pp: ProgramPoint) -> AbsValue<A> {
        let mut set = BTreeSet::new();
        set.insert(pp);
        AbsValue::Points(set)
    }

    pub fn named_closure(name: &str, arity: usize) -> AbsValue<A> {
        AbsValue::singleton_closure(AbsClosure::Named {
            name: name.to_string(),
            arity,
            collected: Vec::new(),
        })
    }

    /// Whether this value is the least element of its type. Empty tuple,
    /// closure and point sets are bottom for their types.
    pub fn is_bot(&self) -> bool {
        match self {
            AbsValue::Bot(_) => true,
            AbsValue::Tuples(s) => s.is_empty(),
            AbsValue::Closures(s) => s.is_empty(),
            AbsValue::Points(s) => s.is_empty(),
            _ => false,
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, AbsValue::Top(_))
    }
}

/// Abstract-domain operations over one semantics and instantiation.
pub struct Domain<'a, I: Instantiation> {
    pub sem: &'a SkeletalSemantics,
    pub inst: &'a I,
    /// Cardinality cap on tuple sets; exceeding it collapses the set into
    /// the componentwise join of its members.
    pub tuple_cap: usize,
}

pub const DEFAULT_TUPLE_CAP: usize = 64;

impl<'a, I: Instantiation> Clone for Domain<'a, I> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<'a, I: Instantiation> Copy for Domain<'a, I> {}

impl<'a, I: Instantiation> Domain<'a, I> {
    pub fn new(sem: &'a SkeletalSemantics, inst: &'a I) -> Self {
        Domain { sem, inst, tuple_cap: DEFAULT_TUPLE_CAP }
    }

    fn adt_of(&self, ctor: &str) -> Result<String, DomainError> {
        self.sem
            .constructor(ctor)
            .map(|c| c.adt.clone())
            .ok_or_else(|| DomainError(format!("unknown constructor `{ctor}`")))
    }

    /// The canonical least element of the type.
    pub fn bot(&self, ty: &TypeExpr) -> AbsValue<I::AbsBase> {
        match ty {
            TypeExpr::Tuple(_) => AbsValue::Tuples(BTreeSet::new()),
            TypeExpr::Arrow(_, _) => AbsValue::Closures(BTreeSet::new()),
            TypeExpr::Base(b) if self.sem.program_types.contains(b) => {
                AbsValue::Points(BTreeSet::new())
            }
            _ => AbsValue::Bot(ty.clone()),
        }
    }

    /// The canonical greatest element of the type.
    pub fn top(&self, ty: &TypeExpr) -> AbsValue<I::AbsBase> {
        if let TypeExpr::Base(b) = ty {
            if self.sem.type_decl(b).map_or(false, |d| {
                matches!(d.body, crate::ast::TypeDeclBody::Unspecified)
            }) {
                if let Some(payload) = self.inst.top_payload(b) {
                    return AbsValue::Base { ty: b.clone(), payload };
                }
            }
        }
        AbsValue::Top(ty.clone())
    }

    /// Rewrites a value into normal form.
    pub fn normalize(&self, v: AbsValue<I::AbsBase>) -> Result<AbsValue<I::AbsBase>, DomainError> {
        match v {
            AbsValue::Bot(ty) => Ok(self.bot(&ty)),
            AbsValue::Top(ty) => Ok(self.top(&ty)),
            AbsValue::Base { ty, payload } => Ok(AbsValue::Base { ty, payload }),
            AbsValue::Points(s) => Ok(AbsValue::Points(s)),
            AbsValue::Constr(name, inner) => {
                let inner = self.normalize(*inner)?;
                if inner.is_bot() {
                    let adt = self.adt_of(&name)?;
                    Ok(self.bot(&TypeExpr::Base(adt)))
                } else {
                    Ok(AbsValue::Constr(name, Box::new(inner)))
                }
            }
            AbsValue::Tuples(set) => {
                let mut tuples = Vec::new();
                'outer: for tuple in set {
                    let mut components = Vec::with_capacity(tuple.len());
                    for c in tuple {
                        let c = self.normalize(c)?;
                        if c.is_bot() {
                            continue 'outer; // a bottom component empties the tuple
                        }
                        components.push(c);
                    }
                    tuples.push(components);
                }
                let tuples = self.prune_tuples(tuples)?;
                if tuples.len() > self.tuple_cap {
                    let collapsed = self.collapse_tuples(tuples)?;
                    let mut set = BTreeSet::new();
                    set.insert(collapsed);
                    Ok(AbsValue::Tuples(set))
                } else {
                    Ok(AbsValue::Tuples(tuples.into_iter().collect()))
                }
            }
            AbsValue::Closures(set) => {
                let mut closures = Vec::new();
                for c in set {
                    closures.push(match c {
                        AbsClosure::Named { name, arity, collected } => {
                            let collected = collected
                                .into_iter()
                                .map(|v| self.normalize(v))
                                .collect::<Result<Vec<_>, _>>()?;
                            AbsClosure::Named { name, arity, collected }
                        }
                        AbsClosure::Anon { lambda, env } => {
                            let env = env
                                .into_iter()
                                .map(|(k, v)| Ok((k, self.normalize(v)?)))
                                .collect::<Result<AbsEnv<_>, DomainError>>()?;
                            AbsClosure::Anon { lambda, env }
                        }
                    });
                }
                let closures = self.prune_closures(closures)?;
                Ok(AbsValue::Closures(closures.into_iter().collect()))
            }
        }
    }

    // Keeps only maximal tuples; one representative per equivalence class.
    fn prune_tuples(
        &self,
        tuples: Vec<Vec<AbsValue<I::AbsBase>>>,
    ) -> Result<Vec<Vec<AbsValue<I::AbsBase>>>, DomainError> {
        let tuples: Vec<_> = tuples.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n = tuples.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            if !keep[i] {
                continue;
            }
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                if self.tuple_leq(&tuples[i], &tuples[j])? {
                    let back = self.tuple_leq(&tuples[j], &tuples[i])?;
                    if !back || j < i {
                        keep[i] = false;
                        break;
                    }
                }
            }
        }
        Ok(tuples
            .into_iter()
            .zip(keep)
            .filter_map(|(t, k)| k.then_some(t))
            .collect())
    }

    fn collapse_tuples(
        &self,
        tuples: Vec<Vec<AbsValue<I::AbsBase>>>,
    ) -> Result<Vec<AbsValue<I::AbsBase>>, DomainError> {
        let mut iter = tuples.into_iter();
        let mut acc = iter.next().expect("collapse of empty tuple set");
        for tuple in iter {
            if tuple.len() != acc.len() {
                return Err(DomainError("tuple arity mismatch in abstract tuple set".into()));
            }
            for (a, b) in acc.iter_mut().zip(tuple) {
                *a = self.join(a, &b)?;
            }
        }
        Ok(acc)
    }

    fn prune_closures(
        &self,
        closures: Vec<AbsClosure<I::AbsBase>>,
    ) -> Result<Vec<AbsClosure<I::AbsBase>>, DomainError> {
        let closures: Vec<_> =
            closures.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n = closures.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            if !keep[i] {
                continue;
            }
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                if self.closure_leq(&closures[i], &closures[j])? {
                    let back = self.closure_leq(&closures[j], &closures[i])?;
                    if !back || j < i {
                        keep[i] = false;
                        break;
                    }
                }
            }
        }
        Ok(closures
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect())
    }

    /// The partial order, on values of the same type.
    pub fn leq(
        &self,
        a: &AbsValue<I::AbsBase>,
        b: &AbsValue<I::AbsBase>,
    ) -> Result<bool, DomainError> {
        if a.is_bot() {
            return Ok(true);
        }
        if b.is_top() {
            return Ok(true);
        }
        if a.is_top() {
            return Ok(false); // top is only below top, handled above
        }
        if b.is_bot() {
            return Ok(false);
        }
        match (a, b) {
            (AbsValue::Base { ty: t1, payload: p1 }, AbsValue::Base { ty: t2, payload: p2 }) => {
                if t1 != t2 {
                    return Err(DomainError(format!(
                        "compared base values of types `{t1}` and `{t2}`"
                    )));
                }
                Ok(self.inst.base_leq(t1, p1, p2))
            }
            (AbsValue::Constr(c, x), AbsValue::Constr(d, y)) => {
                if self.adt_of(c)? != self.adt_of(d)? {
                    return Err(DomainError(format!(
                        "compared constructors `{c}` and `{d}` of different types"
                    )));
                }
                if c != d {
                    return Ok(false);
                }
                self.leq(x, y)
            }
            (AbsValue::Tuples(s1), AbsValue::Tuples(s2)) => {
                for t1 in s1 {
                    let mut found = false;
                    for t2 in s2 {
                        if self.tuple_leq(t1, t2)? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (AbsValue::Closures(f1), AbsValue::Closures(f2)) => {
                for c1 in f1 {
                    let mut found = false;
                    for c2 in f2 {
                        if self.closure_leq(c1, c2)? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (AbsValue::Points(p1), AbsValue::Points(p2)) => Ok(p1.is_subset(p2)),
            _ => Err(DomainError(format!(
                "compared abstract values of different shapes: {a:?} vs {b:?}"
            ))),
        }
    }

    fn tuple_leq(
        &self,
        a: &[AbsValue<I::AbsBase>],
        b: &[AbsValue<I::AbsBase>],
    ) -> Result<bool, DomainError> {
        if a.len() != b.len() {
            return Err(DomainError("tuple arity mismatch in abstract tuple set".into()));
        }
        for (x, y) in a.iter().zip(b) {
            if !self.leq(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn closure_leq(
        &self,
        a: &AbsClosure<I::AbsBase>,
        b: &AbsClosure<I::AbsBase>,
    ) -> Result<bool, DomainError> {
        match (a, b) {
            (
                AbsClosure::Named { name: n1, arity: a1, collected: c1 },
                AbsClosure::Named { name: n2, arity: a2, collected: c2 },
            ) => {
                if n1 != n2 || a1 != a2 || c1.len() != c2.len() {
                    return Ok(false);
                }
                for (x, y) in c1.iter().zip(c2) {
                    if !self.leq(x, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (
                AbsClosure::Anon { lambda: l1, env: e1 },
                AbsClosure::Anon { lambda: l2, env: e2 },
            ) => {
                if l1 != l2 {
                    return Ok(false);
                }
                self.env_leq(e1, e2)
            }
            _ => Ok(false),
        }
    }

    pub fn env_leq(
        &self,
        a: &AbsEnv<I::AbsBase>,
        b: &AbsEnv<I::AbsBase>,
    ) -> Result<bool, DomainError> {
        if a.len() != b.len() {
            return Ok(false);
        }
        for (name, v1) in a {
            match b.get(name) {
                Some(v2) => {
                    if !self.leq(v1, v2)? {
                        return Ok(false);
                    }
                }
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// The join, on values of the same type. The result is in normal form.
    pub fn join(
        &self,
        a: &AbsValue<I::AbsBase>,
        b: &AbsValue<I::AbsBase>,
    ) -> Result<AbsValue<I::AbsBase>, DomainError> {
        if a.is_bot() {
            return Ok(b.clone());
        }
        if b.is_bot() {
            return Ok(a.clone());
        }
        if a.is_top() {
            return Ok(a.clone());
        }
        if b.is_top() {
            return Ok(b.clone());
        }
        match (a, b) {
            (AbsValue::Base { ty: t1, payload: p1 }, AbsValue::Base { ty: t2, payload: p2 }) => {
                if t1 != t2 {
                    return Err(DomainError(format!(
                        "joined base values of types `{t1}` and `{t2}`"
                    )));
                }
                Ok(match self.inst.base_join(t1, p1, p2) {
                    BaseLattice::Bot => self.bot(&TypeExpr::Base(t1.clone())),
                    BaseLattice::Mid(p) => AbsValue::Base { ty: t1.clone(), payload: p },
                    BaseLattice::Top => self.top(&TypeExpr::Base(t1.clone())),
                })
            }
            (AbsValue::Constr(c, x), AbsValue::Constr(d, y)) => {
                let adt = self.adt_of(c)?;
                if adt != self.adt_of(d)? {
                    return Err(DomainError(format!(
                        "joined constructors `{c}` and `{d}` of different types"
                    )));
                }
                if c == d {
                    Ok(AbsValue::Constr(c.clone(), Box::new(self.join(x, y)?)))
                } else {
                    Ok(self.top(&TypeExpr::Base(adt)))
                }
            }
            (AbsValue::Tuples(s1), AbsValue::Tuples(s2)) => {
                let union: BTreeSet<_> = s1.union(s2).cloned().collect();
                self.normalize(AbsValue::Tuples(union))
            }
            (AbsValue::Closures(f1), AbsValue::Closures(f2)) => {
                let union: BTreeSet<_> = f1.union(f2).cloned().collect();
                self.normalize(AbsValue::Closures(union))
            }
            (AbsValue::Points(p1), AbsValue::Points(p2)) => {
                Ok(AbsValue::Points(p1.union(p2).cloned().collect()))
            }
            _ => Err(DomainError(format!(
                "joined abstract values of different shapes: {a:?} vs {b:?}"
            ))),
        }
    }

    /// Pointwise join of abstract environments over the same domain.
    pub fn env_join(
        &self,
        a: &AbsEnv<I::AbsBase>,
        b: &AbsEnv<I::AbsBase>,
    ) -> Result<AbsEnv<I::AbsBase>, DomainError> {
        let mut out = AbsEnv::new();
        for (name, v1) in a {
            let v2 = b.get(name).ok_or_else(|| {
                DomainError(format!("joined environments with different domains (`{name}`)"))
            })?;
            out.insert(name.clone(), self.join(v1, v2)?);
        }
        if b.len() != a.len() {
            return Err(DomainError("joined environments with different domains".into()));
        }
        Ok(out)
    }

    /// Decides `v ∈ γ(state, a)`.
    pub fn gamma_contains(
        &self,
        state: &I::State,
        a: &AbsValue<I::AbsBase>,
        v: &Value<I::Base>,
    ) -> Result<bool, DomainError> {
        if a.is_top() {
            return Ok(true);
        }
        if a.is_bot() {
            return Ok(false);
        }
        match (a, v) {
            (AbsValue::Base { ty, payload }, Value::Base { ty: vty, payload: vp }) => {
                if ty != vty {
                    return Err(DomainError(format!(
                        "membership of a `{vty}` value in a `{ty}` abstraction"
                    )));
                }
                Ok(self.inst.gamma_base(state, ty, payload, vp))
            }
            (AbsValue::Constr(c, x), Value::Constr(d, w)) => {
                if c != d {
                    return Ok(false);
                }
                self.gamma_contains(state, x, w)
            }
            (AbsValue::Tuples(set), Value::Tuple(vs)) => {
                'tuples: for tuple in set {
                    if tuple.len() != vs.len() {
                        continue;
                    }
                    for (x, w) in tuple.iter().zip(vs) {
                        if !self.gamma_contains(state, x, w)? {
                            continue 'tuples;
                        }
                    }
                    return Ok(true);
                }
                Ok(false)
            }
            (AbsValue::Closures(set), Value::NamedClosure { name, arity, collected }) => {
                'closures: for c in set {
                    if let AbsClosure::Named { name: n, arity: a, collected: ca } = c {
                        if n != name || a != arity || ca.len() != collected.len() {
                            continue;
                        }
                        for (x, w) in ca.iter().zip(collected) {
                            if !self.gamma_contains(state, x, w)? {
                                continue 'closures;
                            }
                        }
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            (AbsValue::Closures(set), Value::AnonClosure { lambda, env }) => {
                'closures: for c in set {
                    if let AbsClosure::Anon { lambda: l, env: e } = c {
                        if l != lambda || e.len() != env.len() {
                            continue;
                        }
                        for (name, x) in e {
                            match env.get(name) {
                                Some(w) => {
                                    if !self.gamma_contains(state, x, w)? {
                                        continue 'closures;
                                    }
                                }
                                None => continue 'closures,
                            }
                        }
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            (AbsValue::Points(set), Value::Point(pp)) => Ok(set.contains(pp)),
            _ => Err(DomainError(format!(
                "membership check on mismatched shapes: {a:?} vs concrete value"
            ))),
        }
    }

    /// Decides pointwise membership of a concrete environment in the
    /// concretisation of an abstract one (same domains required).
    pub fn gamma_env_contains(
        &self,
        state: &I::State,
        abs_env: &AbsEnv<I::AbsBase>,
        env: &crate::value::Env<I::Base>,
    ) -> Result<bool, DomainError> {
        if abs_env.len() != env.len() {
            return Ok(false);
        }
        for (name, a) in abs_env {
            match env.get(name) {
                Some(v) => {
                    if !self.gamma_contains(state, a, v)? {
                        return Ok(false);
                    }
                }
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// The exact abstraction of a ground (program) value: constructors map
    /// to constructors, tuples to singleton tuple sets, base values
    /// through the instantiation's literal abstraction.
    pub fn abstract_ground(
        &self,
        v: &Value<I::Base>,
    ) -> Result<AbsValue<I::AbsBase>, DomainError> {
        match v {
            Value::Constr(name, arg) => {
                Ok(AbsValue::Constr(name.clone(), Box::new(self.abstract_ground(arg)?)))
            }
            Value::Tuple(vs) => {
                let components = vs
                    .iter()
                    .map(|v| self.abstract_ground(v))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(AbsValue::singleton_tuple(components))
            }
            Value::Base { ty, payload } => Ok(AbsValue::Base {
                ty: ty.clone(),
                payload: self.inst.abstract_literal(ty, payload),
            }),
            Value::Point(pp) => Ok(AbsValue::point(pp.clone())),
            Value::NamedClosure { .. } | Value::AnonClosure { .. } => Err(DomainError(
                "ground program values cannot contain closures".into(),
            )),
        }
    }

    /// Renders an abstract value in the canonical text format.
    pub fn render(&self, v: &AbsValue<I::AbsBase>) -> String {
        if v.is_bot() {
            return "bot".to_string();
        }
        match v {
            AbsValue::Bot(_) => unreachable!(),
            AbsValue::Top(_) => "top".to_string(),
            AbsValue::Base { ty, payload } => self.inst.render_abs_base(ty, payload),
            AbsValue::Constr(name, arg) => match arg.as_ref() {
                AbsValue::Tuples(s) if s.len() == 1 && s.iter().next().unwrap().is_empty() => {
                    name.clone()
                }
                other => format!("{name} {}", self.render(other)),
            },
            AbsValue::Tuples(set) => {
                let tuples: Vec<String> = set
                    .iter()
                    .map(|t| {
                        let inner: Vec<String> = t.iter().map(|v| self.render(v)).collect();
                        format!("({})", inner.join(", "))
                    })
                    .collect();
                format!("{{{}}}", tuples.join(", "))
            }
            AbsValue::Closures(set) => {
                let closures: Vec<String> = set
                    .iter()
                    .map(|c| match c {
                        AbsClosure::Named { name, arity, collected } => {
                            if collected.is_empty() {
                                format!("<fun {name}/{arity}>")
                            } else {
                                format!("<fun {name}/{arity} +{}>", collected.len())
                            }
                        }
                        AbsClosure::Anon { .. } => "<closure>".to_string(),
                    })
                    .collect();
                format!("{{{}}}", closures.join(", "))
            }
            AbsValue::Points(set) => {
                let pps: Vec<String> = set.iter().map(|pp| format!("@{pp}")).collect();
                format!("{{{}}}", pps.join(", "))
            }
        }
    }
}
