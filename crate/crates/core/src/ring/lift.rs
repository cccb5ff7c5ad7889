use std::sync::Arc;

use super::{RingDescriptor, RingElement, RingKind};
use crate::error::{Error, Result};

/// A finite flat local Z_p-algebra Λ̃ = Z_p[x]/(ĝ), kept modulo p^N,
/// together with its surjection onto Λ = (Z/p^n)[x]/(g).
///
/// ĝ is the canonical-representative lift of g, so the projection is plain
/// coefficient reduction mod p^n and the canonical section is the identity
/// on coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatLift {
    lambda: Arc<RingDescriptor>,
    lambda_tilde: Arc<RingDescriptor>,
}

impl FlatLift {
    pub fn new(lambda: &Arc<RingDescriptor>, precision: u32) -> Result<Self> {
        if lambda.kind() != RingKind::LocalAlgebra {
            return Err(Error::WrongKind(lambda.kind().name()));
        }
        let n = lambda.lambda_pexp().expect("local algebras record n");
        if precision < n {
            return Err(Error::PrecisionMismatch(format!(
                "lift precision {precision} is below lambda_pexp {n}"
            )));
        }
        let lambda_tilde = RingDescriptor::local_kind(
            RingKind::FlatLift,
            lambda.p(),
            precision,
            None,
            precision,
            lambda.x_modulus().to_vec(),
        )?;
        Ok(FlatLift {
            lambda: lambda.clone(),
            lambda_tilde: Arc::new(lambda_tilde),
        })
    }

    pub fn lambda(&self) -> &Arc<RingDescriptor> {
        &self.lambda
    }

    pub fn lambda_tilde(&self) -> &Arc<RingDescriptor> {
        &self.lambda_tilde
    }

    /// n with p^n Λ̃ contained in the kernel of the projection.
    pub fn kernel_exponent(&self) -> u32 {
        self.lambda.exponent()
    }

    /// Λ̃ -> Λ.
    pub fn project(&self, e: &RingElement) -> RingElement {
        self.lambda
            .map_from(&self.lambda_tilde, e)
            .expect("projection is defined on the lift")
    }

    /// Canonical representative of an element of Λ in Λ̃.
    pub fn section(&self, e: &RingElement) -> RingElement {
        e.clone()
    }
}
