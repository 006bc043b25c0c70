//! Exact and modular linear and polynomial algebra.

pub mod factor;
pub mod int;
pub mod modp;
pub mod prime;

pub use factor::{factor_mod, Factorization};
pub use int::{charpoly_exact, discriminant, IntMatrix, IntPoly};
pub use modp::{charpoly_mod, ModMatrix, ModPoly};
pub use prime::{is_prime, primes_from};

/// `gcd(P, P') == 1` over F_p.
pub fn squarefree_mod(p: &ModPoly) -> bool {
    p.is_squarefree()
}

pub fn reciprocal(p: &ModPoly) -> ModPoly {
    p.reciprocal()
}
