//! Static checks for skeletal semantics: well-formedness of declarations,
//! the typing judgment for terms and skeletons, and collection of the
//! abstractions occurring in a semantics.
//!
//! Checking rebuilds the syntax tree with two decorations the evaluators
//! rely on: every skeleton node carries its result type, and every
//! abstraction carries the typing environment of its free variables.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::ast::{
    AbsTerm, Pattern, PatternKind, SkeletalSemantics, Skeleton, SkeletonKind, Term, TermKind,
    TypeDeclBody, TypeExpr, TypingEnv,
};
use crate::error::CheckError;

/// Number of leading arrows of a declared type.
pub fn arity(ty: &TypeExpr) -> usize {
    ty.arity()
}

/// Checks a parsed semantics and returns its decorated form.
pub fn check_semantics(sem: &SkeletalSemantics) -> Result<SkeletalSemantics, CheckError> {
    let mut checked = sem.clone();
    for decl in &sem.types {
        if let TypeDeclBody::Variants(variants) = &decl.body {
            for (_, arg_type) in variants {
                check_type_wf(sem, arg_type, &decl.span)?;
            }
        }
    }
    for name in &sem.program_types {
        match sem.type_decl(name) {
            Some(decl) if matches!(decl.body, TypeDeclBody::Variants(_)) => {}
            Some(decl) => {
                return Err(CheckError::ty(
                    format!("program type `{name}` is not an algebraic data type"),
                    &decl.span,
                ))
            }
            None => {
                return Err(CheckError::UnboundName {
                    name: name.clone(),
                    span: crate::ast::Span::synthetic(),
                })
            }
        }
    }
    for (idx, decl) in sem.terms.iter().enumerate() {
        check_type_wf(sem, &decl.declared_type, &decl.span)?;
        if let Some(body) = &decl.body {
            let (body, ty) = typecheck_term(sem, &TypingEnv::new(), body)?;
            if ty != decl.declared_type {
                return Err(CheckError::ty(
                    format!(
                        "val `{}` is declared with type {} but its body has type {}",
                        decl.name, decl.declared_type, ty
                    ),
                    &decl.span,
                ));
            }
            checked.replace_term_body(idx, body);
        }
    }
    Ok(checked)
}

fn check_type_wf(sem: &SkeletalSemantics, ty: &TypeExpr, span: &crate::ast::Span) -> Result<(), CheckError> {
    match ty {
        TypeExpr::Base(b) => {
            if sem.type_decl(b).is_none() {
                return Err(CheckError::UnboundName { name: b.clone(), span: span.clone() });
            }
            Ok(())
        }
        TypeExpr::Arrow(dom, cod) => {
            check_type_wf(sem, dom, span)?;
            check_type_wf(sem, cod, span)
        }
        TypeExpr::Tuple(ts) => {
            for t in ts {
                check_type_wf(sem, t, span)?;
            }
            Ok(())
        }
    }
}

/// Infers the type of a term and returns its decorated copy.
pub fn typecheck_term(
    sem: &SkeletalSemantics,
    env: &TypingEnv,
    term: &Term,
) -> Result<(Term, TypeExpr), CheckError> {
    let (kind, ty) = match &term.kind {
        TermKind::Var(x) => {
            // Local bindings shadow top-level declarations.
            let ty = if let Some(ty) = env.get(x) {
                ty.clone()
            } else if let Some(decl) = sem.term_decl(x) {
                decl.declared_type.clone()
            } else {
                return Err(CheckError::UnboundName { name: x.clone(), span: term.span.clone() });
            };
            (TermKind::Var(x.clone()), ty)
        }
        TermKind::Constr(name, arg) => {
            let ctor = sem.constructor(name).ok_or_else(|| CheckError::UnboundName {
                name: name.clone(),
                span: term.span.clone(),
            })?;
            let (arg, arg_ty) = typecheck_term(sem, env, arg)?;
            if arg_ty != ctor.arg_type {
                return Err(CheckError::ty(
                    format!(
                        "constructor `{name}` expects an argument of type {} but got {}",
                        ctor.arg_type, arg_ty
                    ),
                    &term.span,
                ));
            }
            (
                TermKind::Constr(name.clone(), Box::new(arg)),
                TypeExpr::Base(ctor.adt.clone()),
            )
        }
        TermKind::Tuple(ts) => {
            let mut kinds = Vec::with_capacity(ts.len());
            let mut tys = Vec::with_capacity(ts.len());
            for t in ts {
                let (t, ty) = typecheck_term(sem, env, t)?;
                kinds.push(t);
                tys.push(ty);
            }
            (TermKind::Tuple(kinds), TypeExpr::Tuple(tys))
        }
        TermKind::Abs(abs) => {
            check_linear(&abs.pattern)?;
            check_type_wf(sem, &abs.arg_type, &term.span)?;
            let inner = extend_env(sem, env, &abs.pattern, &abs.arg_type)?;
            let (body, body_ty) = typecheck_skeleton(sem, &inner, &abs.body)?;
            let gamma = capture_env(env, abs);
            let checked = AbsTerm {
                gamma,
                pattern: abs.pattern.clone(),
                arg_type: abs.arg_type.clone(),
                body,
            };
            let ty = TypeExpr::arrow(abs.arg_type.clone(), body_ty);
            (TermKind::Abs(Arc::new(checked)), ty)
        }
    };
    Ok((Term { kind, span: term.span.clone() }, ty))
}

/// Infers the type of a skeleton and returns its decorated copy.
pub fn typecheck_skeleton(
    sem: &SkeletalSemantics,
    env: &TypingEnv,
    skel: &Skeleton,
) -> Result<(Skeleton, TypeExpr), CheckError> {
    let (kind, ty) = match &skel.kind {
        SkeletonKind::Term(t) => {
            let (t, ty) = typecheck_term(sem, env, t)?;
            (SkeletonKind::Term(t), ty)
        }
        SkeletonKind::App(head, args) => {
            let (head, mut ty) = typecheck_term(sem, env, head)?;
            let mut checked_args = Vec::with_capacity(args.len());
            // Applications are typed by repeated arrow elimination, one
            // argument at a time.
            for arg in args {
                let (arg, arg_ty) = typecheck_term(sem, env, arg)?;
                match ty {
                    TypeExpr::Arrow(dom, cod) => {
                        if arg_ty != *dom {
                            return Err(CheckError::ty(
                                format!("argument has type {arg_ty} but {dom} was expected"),
                                &arg.span,
                            ));
                        }
                        ty = *cod;
                    }
                    other => {
                        return Err(CheckError::ty(
                            format!("value of type {other} is applied to an argument"),
                            &arg.span,
                        ))
                    }
                }
                checked_args.push(arg);
            }
            (SkeletonKind::App(head, checked_args), ty)
        }
        SkeletonKind::Let { pattern, bound, body } => {
            check_linear(pattern)?;
            let (bound, bound_ty) = typecheck_skeleton(sem, env, bound)?;
            let inner = extend_env(sem, env, pattern, &bound_ty)?;
            let (body, ty) = typecheck_skeleton(sem, &inner, body)?;
            (
                SkeletonKind::Let {
                    pattern: pattern.clone(),
                    bound: Box::new(bound),
                    body: Box::new(body),
                },
                ty,
            )
        }
        SkeletonKind::Branch(branches) => {
            let mut checked = Vec::with_capacity(branches.len());
            let mut ty: Option<TypeExpr> = None;
            for b in branches {
                let (b, b_ty) = typecheck_skeleton(sem, env, b)?;
                match &ty {
                    None => ty = Some(b_ty),
                    Some(t) if *t == b_ty => {}
                    Some(t) => {
                        return Err(CheckError::ty(
                            format!("branch has type {b_ty} but an earlier branch has type {t}"),
                            &b.span,
                        ))
                    }
                }
                checked.push(b);
            }
            let ty = ty.ok_or_else(|| CheckError::ty("empty branch", &skel.span))?;
            (SkeletonKind::Branch(checked), ty)
        }
        SkeletonKind::Match { scrutinee, arms } => {
            let (scrutinee, scrut_ty) = typecheck_term(sem, env, scrutinee)?;
            let mut checked = Vec::with_capacity(arms.len());
            let mut ty: Option<TypeExpr> = None;
            for (pat, body) in arms {
                check_linear(pat)?;
                let inner = extend_env(sem, env, pat, &scrut_ty)?;
                let (body, b_ty) = typecheck_skeleton(sem, &inner, body)?;
                match &ty {
                    None => ty = Some(b_ty),
                    Some(t) if *t == b_ty => {}
                    Some(t) => {
                        return Err(CheckError::ty(
                            format!("match arm has type {b_ty} but an earlier arm has type {t}"),
                            &body.span,
                        ))
                    }
                }
                checked.push((pat.clone(), body));
            }
            let ty = ty.ok_or_else(|| CheckError::ty("match with no arms", &skel.span))?;
            (SkeletonKind::Match { scrutinee, arms: checked }, ty)
        }
    };
    let checked = Skeleton { kind, ty: Some(ty.clone()), span: skel.span.clone() };
    Ok((checked, ty))
}

/// Extends a typing environment by matching a pattern against a type.
///
/// Total exactly on pattern/type pairs of matching shape: variables bind
/// the whole type, tuple patterns distribute over tuple types, and
/// constructor patterns invert the constructor's declaration.
pub fn extend_env(
    sem: &SkeletalSemantics,
    env: &TypingEnv,
    pattern: &Pattern,
    ty: &TypeExpr,
) -> Result<TypingEnv, CheckError> {
    let mut out = env.clone();
    extend_env_into(sem, &mut out, pattern, ty)?;
    Ok(out)
}

fn extend_env_into(
    sem: &SkeletalSemantics,
    env: &mut TypingEnv,
    pattern: &Pattern,
    ty: &TypeExpr,
) -> Result<(), CheckError> {
    match (&pattern.kind, ty) {
        (PatternKind::Wild, _) => Ok(()),
        (PatternKind::Var(x), _) => {
            env.insert(x.clone(), ty.clone());
            Ok(())
        }
        (PatternKind::Tuple(ps), TypeExpr::Tuple(ts)) if ps.len() == ts.len() => {
            for (p, t) in ps.iter().zip(ts) {
                extend_env_into(sem, env, p, t)?;
            }
            Ok(())
        }
        (PatternKind::Constr(name, inner), TypeExpr::Base(b)) => {
            let ctor = sem.constructor(name).ok_or_else(|| CheckError::UnboundName {
                name: name.clone(),
                span: pattern.span.clone(),
            })?;
            if ctor.adt != *b {
                return Err(CheckError::ty(
                    format!("constructor `{name}` belongs to type {} not {b}", ctor.adt),
                    &pattern.span,
                ));
            }
            extend_env_into(sem, env, inner, &ctor.arg_type)
        }
        _ => Err(CheckError::ty(
            format!("pattern does not match type {ty}"),
            &pattern.span,
        )),
    }
}

/// Rejects patterns that bind the same variable twice.
pub fn check_linear(pattern: &Pattern) -> Result<(), CheckError> {
    let vars = pattern.bound_vars();
    let mut seen = BTreeSet::new();
    for v in vars {
        if !seen.insert(v) {
            return Err(CheckError::ty(
                format!("variable `{v}` is bound twice in the same pattern"),
                &pattern.span,
            ));
        }
    }
    Ok(())
}

// The free variables of an abstraction are the variable occurrences not
// bound inside it; the captured environment keeps only those that the
// surrounding typing environment actually binds (the rest must resolve to
// top-level declarations).
fn capture_env(env: &TypingEnv, abs: &AbsTerm) -> TypingEnv {
    let mut bound: Vec<String> =
        abs.pattern.bound_vars().into_iter().map(String::from).collect();
    let mut free = BTreeSet::new();
    free_vars_skeleton(&abs.body, &mut bound, &mut free);
    env.iter()
        .filter(|(name, _)| free.contains(name.as_str()))
        .map(|(name, ty)| (name.clone(), ty.clone()))
        .collect()
}

fn free_vars_term(term: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match &term.kind {
        TermKind::Var(x) => {
            if !bound.iter().any(|b| b == x) {
                out.insert(x.clone());
            }
        }
        TermKind::Constr(_, arg) => free_vars_term(arg, bound, out),
        TermKind::Tuple(ts) => {
            for t in ts {
                free_vars_term(t, bound, out);
            }
        }
        TermKind::Abs(abs) => {
            let depth = bound.len();
            bound.extend(abs.pattern.bound_vars().into_iter().map(String::from));
            free_vars_skeleton(&abs.body, bound, out);
            bound.truncate(depth);
        }
    }
}

fn free_vars_skeleton(skel: &Skeleton, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match &skel.kind {
        SkeletonKind::Term(t) => free_vars_term(t, bound, out),
        SkeletonKind::App(head, args) => {
            free_vars_term(head, bound, out);
            for a in args {
                free_vars_term(a, bound, out);
            }
        }
        SkeletonKind::Let { pattern, bound: b, body } => {
            free_vars_skeleton(b, bound, out);
            let depth = bound.len();
            bound.extend(pattern.bound_vars().into_iter().map(String::from));
            free_vars_skeleton(body, bound, out);
            bound.truncate(depth);
        }
        SkeletonKind::Branch(bs) => {
            for b in bs {
                free_vars_skeleton(b, bound, out);
            }
        }
        SkeletonKind::Match { scrutinee, arms } => {
            free_vars_term(scrutinee, bound, out);
            for (pat, body) in arms {
                let depth = bound.len();
                bound.extend(pat.bound_vars().into_iter().map(String::from));
                free_vars_skeleton(body, bound, out);
                bound.truncate(depth);
            }
        }
    }
}

/// Every abstraction occurring in the semantics, carrying the typing
/// environment of its free variables. Requires a checked semantics.
pub fn funs(sem: &SkeletalSemantics) -> BTreeSet<Arc<AbsTerm>> {
    let mut out = BTreeSet::new();
    for decl in &sem.terms {
        if let Some(body) = &decl.body {
            collect_abs_term(body, &mut out);
        }
    }
    out
}

fn collect_abs_term(term: &Term, out: &mut BTreeSet<Arc<AbsTerm>>) {
    match &term.kind {
        TermKind::Var(_) => {}
        TermKind::Constr(_, arg) => collect_abs_term(arg, out),
        TermKind::Tuple(ts) => {
            for t in ts {
                collect_abs_term(t, out);
            }
        }
        TermKind::Abs(abs) => {
            out.insert(abs.clone());
            collect_abs_skeleton(&abs.body, out);
        }
    }
}

fn collect_abs_skeleton(skel: &Skeleton, out: &mut BTreeSet<Arc<AbsTerm>>) {
    match &skel.kind {
        SkeletonKind::Term(t) => collect_abs_term(t, out),
        SkeletonKind::App(head, args) => {
            collect_abs_term(head, out);
            for a in args {
                collect_abs_term(a, out);
            }
        }
        SkeletonKind::Let { bound, body, .. } => {
            collect_abs_skeleton(bound, out);
            collect_abs_skeleton(body, out);
        }
        SkeletonKind::Branch(bs) => {
            for b in bs {
                collect_abs_skeleton(b, out);
            }
        }
        SkeletonKind::Match { scrutinee, arms } => {
            collect_abs_term(scrutinee, out);
            for (_, body) in arms {
                collect_abs_skeleton(body, out);
            }
        }
    }
}
