//! Concrete semantic values and environments.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::ast::AbsTerm;
use crate::ppoint::ProgramPoint;

/// A concrete value, parameterized by the instantiation's base payloads.
///
/// In program-point mode, values of program types are represented by a
/// `Point` into the analysed program instead of the subterm itself.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value<B> {
    Tuple(Vec<Value<B>>),
    Constr(String, Box<Value<B>>),
    /// A declared function referenced by name, with the arguments
    /// accumulated so far (fewer than its arity).
    NamedClosure {
        name: String,
        arity: usize,
        collected: Vec<Value<B>>,
    },
    /// A λ together with its captured environment. The abstraction carries
    /// the typing environment of the captured variables.
    AnonClosure {
        lambda: Arc<AbsTerm>,
        env: Env<B>,
    },
    /// A value of an unspecified type, owned by the instantiation.
    Base {
        ty: String,
        payload: B,
    },
    Point(ProgramPoint),
}

pub type Env<B> = BTreeMap<String, Value<B>>;

impl<B> Value<B> {
    pub fn unit() -> Value<B> {
        Value::Tuple(Vec::new())
    }

    pub fn constr(name: &str, arg: Value<B>) -> Value<B> {
        Value::Constr(name.to_string(), Box::new(arg))
    }

    pub fn base(ty: &str, payload: B) -> Value<B> {
        Value::Base { ty: ty.to_string(), payload }
    }

    pub fn named_closure(name: &str, arity: usize) -> Value<B> {
        Value::NamedClosure { name: name.to_string(), arity, collected: Vec::new() }
    }

    pub fn is_closure(&self) -> bool {
        matches!(self, Value::NamedClosure { .. } | Value::AnonClosure { .. })
    }
}

/// Renders a value using the instantiation's base rendering.
pub fn render_value<B>(value: &Value<B>, render_base: &dyn Fn(&B) -> String) -> String {
    let mut out = String::new();
    write_value(value, render_base, &mut out);
    out
}

fn write_value<B>(value: &Value<B>, render_base: &dyn Fn(&B) -> String, out: &mut String) {
    use fmt::Write;
    match value {
        Value::Tuple(vs) => {
            out.push('(');
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(v, render_base, out);
            }
            out.push(')');
        }
        Value::Constr(name, arg) => {
            out.push_str(name);
            match arg.as_ref() {
                Value::Tuple(vs) if vs.is_empty() => {}
                Value::Tuple(_) => write_value(arg, render_base, out),
                other => {
                    out.push(' ');
                    write_value(other, render_base, out);
                }
            }
        }
        Value::NamedClosure { name, arity, collected } => {
            let _ = write!(out, "<fun {name}/{arity}");
            if !collected.is_empty() {
                let _ = write!(out, " +{}", collected.len());
            }
            out.push('>');
        }
        Value::AnonClosure { .. } => out.push_str("<closure>"),
        Value::Base { payload, .. } => out.push_str(&render_base(payload)),
        Value::Point(pp) => {
            let _ = write!(out, "@{pp}");
        }
    }
}
