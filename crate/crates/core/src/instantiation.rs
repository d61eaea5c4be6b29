//! The plug-in bundle a language author supplies to turn the generic
//! engine into an interpreter and an analyzer for one object language:
//! base-value universes, concrete term meanings, abstract base domains,
//! abstract term meanings, and the analysis-state hooks.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;

use crate::absvalue::AbsValue;
use crate::error::{AnalysisError, EvalError};
use crate::value::Value;

/// A base-type literal as it appears in object-program files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Int(BigInt),
    Str(String),
}

/// Result of joining or widening two base payloads. `Bot` and `Top` are
/// canonicalized by the engine into its universal bottom and top values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseLattice<A> {
    Bot,
    Mid(A),
    Top,
}

pub type ValueSet<B> = BTreeSet<Value<B>>;

/// Everything the engine delegates per object language.
///
/// Payload conventions: `Base` payloads are the inhabitants of unspecified
/// types; `AbsBase` payloads are the abstract elements strictly between
/// the engine's universal bottom and top. A domain whose largest element
/// has its own representation (such as an unbounded interval) reports it
/// through [`Instantiation::top_payload`] so the engine can keep one
/// canonical form. Bottom is always represented at the engine level.
pub trait Instantiation {
    type Base: Clone + Ord + Debug;
    type AbsBase: Clone + Ord + Debug;
    /// Global analysis state threaded through abstract evaluation.
    type State: Clone + Ord + Debug;

    // Concrete side.

    /// Reads a literal of the unspecified type `ty` in an object program.
    fn parse_literal(&self, ty: &str, lit: &Literal) -> Result<Self::Base, String>;

    fn render_base(&self, payload: &Self::Base) -> String;

    /// Meaning of a saturated call to the unspecified term `name`. The
    /// result is the finite set of derivable values; an empty set means
    /// the call has no derivation.
    fn call(&self, name: &str, args: &[Value<Self::Base>]) -> Result<ValueSet<Self::Base>, EvalError>;

    /// Meaning of an unspecified non-arrow constant.
    fn constant(&self, name: &str) -> Result<ValueSet<Self::Base>, EvalError> {
        Err(EvalError::MissingInstantiation(name.to_string()))
    }

    // Abstract base domains.

    /// The canonical payload of the largest element of `ty`, when the
    /// domain represents it; `None` makes the engine's top canonical.
    fn top_payload(&self, ty: &str) -> Option<Self::AbsBase>;

    fn base_leq(&self, ty: &str, a: &Self::AbsBase, b: &Self::AbsBase) -> bool;

    fn base_join(&self, ty: &str, a: &Self::AbsBase, b: &Self::AbsBase) -> BaseLattice<Self::AbsBase>;

    /// Widening; must be an upper bound of both arguments and stabilize
    /// every ascending chain. Defaults to the join.
    fn base_widen(&self, ty: &str, a: &Self::AbsBase, b: &Self::AbsBase) -> BaseLattice<Self::AbsBase> {
        self.base_join(ty, a, b)
    }

    fn render_abs_base(&self, ty: &str, a: &Self::AbsBase) -> String;

    /// Decides membership of a concrete payload in the concretisation of
    /// an abstract payload.
    fn gamma_base(&self, state: &Self::State, ty: &str, a: &Self::AbsBase, v: &Self::Base) -> bool;

    /// The exact abstraction of a ground base value, used when unfolding
    /// program points reveals non-program children.
    fn abstract_literal(&self, ty: &str, v: &Self::Base) -> Self::AbsBase;

    // Abstract meanings of unspecified terms.

    fn abs_call(
        &self,
        state: Self::State,
        name: &str,
        args: &[AbsValue<Self::AbsBase>],
    ) -> Result<(AbsValue<Self::AbsBase>, Self::State), AnalysisError>;

    fn abs_constant(&self, name: &str) -> Result<AbsValue<Self::AbsBase>, AnalysisError> {
        Err(AnalysisError::MissingInstantiation(name.to_string()))
    }

    // Analysis state.

    fn initial_state(&self) -> Self::State;

    fn state_leq(&self, a: &Self::State, b: &Self::State) -> bool;

    fn state_join(&self, a: &Self::State, b: &Self::State) -> Self::State;

    /// Hook run at entry of a saturated call to a specified function; may
    /// update the state and replace the arguments. Identity by default.
    fn update_in(
        &self,
        _name: &str,
        state: Self::State,
        args: Vec<AbsValue<Self::AbsBase>>,
    ) -> Result<(Self::State, Vec<AbsValue<Self::AbsBase>>), AnalysisError> {
        Ok((state, args))
    }

    /// Hook run at exit of a saturated call to a specified function; may
    /// update the state and replace the result. Identity by default.
    fn update_out(
        &self,
        _name: &str,
        state: Self::State,
        _args: &[AbsValue<Self::AbsBase>],
        result: AbsValue<Self::AbsBase>,
    ) -> Result<(Self::State, AbsValue<Self::AbsBase>), AnalysisError> {
        Ok((state, result))
    }
}
