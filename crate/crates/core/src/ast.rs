//! Abstract syntax of the Skel meta-language: types, patterns, terms,
//! skeletons and declarations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Source position metadata attached to syntax nodes and errors.
///
/// Spans never take part in node identity: two syntax trees that differ
/// only in positions compare equal. This keeps structural equality of
/// values (which embed skeletons) independent of formatting.
#[derive(Clone, Debug)]
pub struct Span {
    pub file: Arc<str>,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn synthetic() -> Self {
        Span {
            file: Arc::from("<synthetic>"),
            start_line: 0,
            start_col: 0,
            end_line: 0,
            end_col: 0,
        }
    }

    pub fn merge(&self, other: &Span) -> Span {
        Span {
            file: self.file.clone(),
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Span {}
impl PartialOrd for Span {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Span {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}
impl std::hash::Hash for Span {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

/// A Skel type: a declared base type, an arrow, or a tuple.
/// The unit type is the empty tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Base(String),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Tuple(Vec<TypeExpr>),
}

impl TypeExpr {
    pub fn unit() -> TypeExpr {
        TypeExpr::Tuple(Vec::new())
    }

    pub fn base(name: &str) -> TypeExpr {
        TypeExpr::Base(name.to_string())
    }

    pub fn arrow(dom: TypeExpr, cod: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, TypeExpr::Arrow(_, _))
    }

    /// Number of leading arrows before the first non-arrow codomain.
    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut t = self;
        while let TypeExpr::Arrow(_, cod) = t {
            n += 1;
            t = cod;
        }
        n
    }

    /// Domains of the leading arrows paired with the final non-arrow codomain.
    pub fn uncurry(&self) -> (Vec<&TypeExpr>, &TypeExpr) {
        let mut doms = Vec::new();
        let mut t = self;
        while let TypeExpr::Arrow(dom, cod) = t {
            doms.push(dom.as_ref());
            t = cod;
        }
        (doms, t)
    }
}

// Arrows render right-associated; arrow domains are parenthesized.
impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Base(b) => write!(f, "{b}"),
            TypeExpr::Arrow(dom, cod) => {
                if dom.is_arrow() {
                    write!(f, "({dom}) -> {cod}")
                } else {
                    write!(f, "{dom} -> {cod}")
                }
            }
            TypeExpr::Tuple(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Typing environment: skeletal variable names to their types.
pub type TypingEnv = BTreeMap<String, TypeExpr>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub kind: PatternKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    Var(String),
    Wild,
    Constr(String, Box<Pattern>),
    Tuple(Vec<Pattern>),
}

impl Pattern {
    pub fn new(kind: PatternKind) -> Pattern {
        Pattern { kind, span: Span::synthetic() }
    }

    pub fn var(name: &str) -> Pattern {
        Pattern::new(PatternKind::Var(name.to_string()))
    }

    pub fn wild() -> Pattern {
        Pattern::new(PatternKind::Wild)
    }

    pub fn tuple(ps: Vec<Pattern>) -> Pattern {
        Pattern::new(PatternKind::Tuple(ps))
    }

    pub fn constr(name: &str, inner: Pattern) -> Pattern {
        Pattern::new(PatternKind::Constr(name.to_string(), Box::new(inner)))
    }

    /// Variables bound by this pattern, in left-to-right order.
    pub fn bound_vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.kind {
            PatternKind::Var(x) => out.push(x),
            PatternKind::Wild => {}
            PatternKind::Constr(_, p) => p.collect_bound(out),
            PatternKind::Tuple(ps) => {
                for p in ps {
                    p.collect_bound(out);
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Var(String),
    Constr(String, Box<Term>),
    Tuple(Vec<Term>),
    Abs(Arc<AbsTerm>),
}

/// An abstraction `λ p : τ -> S`.
///
/// `gamma` is the typing environment of the abstraction's free variables,
/// restricted to the variables that actually occur free in it. The parser
/// leaves it empty; the type checker fills it in. Closures capture exactly
/// the bindings in `gamma`'s domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbsTerm {
    pub gamma: TypingEnv,
    pub pattern: Pattern,
    pub arg_type: TypeExpr,
    pub body: Skeleton,
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        Term { kind, span: Span::synthetic() }
    }

    pub fn var(name: &str) -> Term {
        Term::new(TermKind::Var(name.to_string()))
    }

    pub fn tuple(ts: Vec<Term>) -> Term {
        Term::new(TermKind::Tuple(ts))
    }

    pub fn constr(name: &str, arg: Term) -> Term {
        Term::new(TermKind::Constr(name.to_string(), Box::new(arg)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Skeleton {
    pub kind: SkeletonKind,
    /// Result type, filled in by the type checker. Evaluators rely on it
    /// to produce precisely typed bottom values.
    pub ty: Option<TypeExpr>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SkeletonKind {
    Term(Term),
    /// `t0 t1 ... tn` with a nonempty argument list.
    App(Term, Vec<Term>),
    Let {
        pattern: Pattern,
        bound: Box<Skeleton>,
        body: Box<Skeleton>,
    },
    Branch(Vec<Skeleton>),
    Match {
        scrutinee: Term,
        arms: Vec<(Pattern, Skeleton)>,
    },
}

impl Skeleton {
    pub fn new(kind: SkeletonKind) -> Skeleton {
        Skeleton { kind, ty: None, span: Span::synthetic() }
    }

    pub fn term(t: Term) -> Skeleton {
        Skeleton::new(SkeletonKind::Term(t))
    }

    /// The checked result type. Panics on unchecked trees, which never
    /// reach an evaluator.
    pub fn checked_ty(&self) -> &TypeExpr {
        self.ty.as_ref().expect("skeleton not type-checked")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    pub body: TypeDeclBody,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeDeclBody {
    Unspecified,
    Variants(Vec<(String, TypeExpr)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermDecl {
    pub name: String,
    pub declared_type: TypeExpr,
    /// `None` for unspecified terms.
    pub body: Option<Term>,
    pub span: Span,
}

impl TermDecl {
    pub fn arity(&self) -> usize {
        self.declared_type.arity()
    }

    pub fn is_specified(&self) -> bool {
        self.body.is_some()
    }
}

/// A constructor as declared by its algebraic data type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub adt: String,
    pub arg_type: TypeExpr,
}

/// A parsed skeletal semantics: type and term declarations, the
/// constructor table derived from them, and the set of program types.
///
/// Declarations are mutually recursive; they are kept in source order so
/// pretty-printing round-trips.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkeletalSemantics {
    pub types: Vec<TypeDecl>,
    pub terms: Vec<TermDecl>,
    /// Order of declarations as written, for printing.
    pub decl_order: Vec<DeclRef>,
    /// Program types: ADTs whose values are object programs, chosen by the
    /// instantiation author.
    pub program_types: BTreeSet<String>,
    type_index: BTreeMap<String, usize>,
    term_index: BTreeMap<String, usize>,
    constructors: BTreeMap<String, Constructor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclRef {
    Type(usize),
    Term(usize),
}

impl SkeletalSemantics {
    pub fn new() -> Self {
        SkeletalSemantics::default()
    }

    /// Registers a type declaration. Fails on redeclared type names or
    /// constructors (constructor names are global).
    pub fn add_type(&mut self, decl: TypeDecl) -> Result<(), String> {
        if self.type_index.contains_key(&decl.name) {
            return Err(format!("type `{}` is declared twice", decl.name));
        }
        if let TypeDeclBody::Variants(variants) = &decl.body {
            for (ctor, arg_type) in variants {
                if self.constructors.contains_key(ctor) {
                    return Err(format!("constructor `{ctor}` is declared twice"));
                }
                self.constructors.insert(
                    ctor.clone(),
                    Constructor { adt: decl.name.clone(), arg_type: arg_type.clone() },
                );
            }
        }
        let idx = self.types.len();
        self.type_index.insert(decl.name.clone(), idx);
        self.types.push(decl);
        self.decl_order.push(DeclRef::Type(idx));
        Ok(())
    }

    pub fn add_term(&mut self, decl: TermDecl) -> Result<(), String> {
        if self.term_index.contains_key(&decl.name) {
            return Err(format!("val `{}` is declared twice", decl.name));
        }
        let idx = self.terms.len();
        self.term_index.insert(decl.name.clone(), idx);
        self.terms.push(decl);
        self.decl_order.push(DeclRef::Term(idx));
        Ok(())
    }

    pub fn type_decl(&self, name: &str) -> Option<&TypeDecl> {
        self.type_index.get(name).map(|i| &self.types[*i])
    }

    pub fn term_decl(&self, name: &str) -> Option<&TermDecl> {
        self.term_index.get(name).map(|i| &self.terms[*i])
    }

    pub fn constructor(&self, name: &str) -> Option<&Constructor> {
        self.constructors.get(name)
    }

    pub fn is_constructor(&self, name: &str) -> bool {
        self.constructors.contains_key(name)
    }

    pub fn is_program_type(&self, ty: &TypeExpr) -> bool {
        match ty {
            TypeExpr::Base(b) => self.program_types.contains(b),
            _ => false,
        }
    }

    /// Declares the program types. Membership is validated by the checker.
    pub fn set_program_types<I: IntoIterator<Item = String>>(&mut self, tys: I) {
        self.program_types = tys.into_iter().collect();
    }

    /// Replaces a term declaration body with its checked form.
    pub(crate) fn replace_term_body(&mut self, idx: usize, body: Term) {
        self.terms[idx].body = Some(body);
    }
}
