//! t-product tensor algebra for robust principal component analysis.
//!
//! This crate implements the tensor nuclear norm machinery built on the
//! t-product of 3-way tensors: mode-3 transforms and block-circulant
//! oracles, the t-SVD with its norms and proximal operator, tangent-space
//! and support projections, seeded samplers for the standard probabilistic
//! models, dual-certificate construction via the golfing scheme, and an ADMM
//! solver for the low-rank plus sparse decomposition
//! `min ||L||_* + lambda ||S||_1` subject to `L + S = X`.
//!
//! The guide under `book/` walks through each piece with runnable snippets.

pub mod certificate;
mod error;
pub mod projections;
pub mod random_models;
pub mod t_algebra;
pub mod tensor_core;
pub mod trpca;

pub use error::{Error, Result};
pub use tensor_core::{DenseTensor, Shape3, SpectralTensor};

// Compile the book's code snippets as doctests so the guide cannot drift
// from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(tensors, "../../../book/src/tensors.md");
    chapter!(t_product, "../../../book/src/t-product.md");
    chapter!(t_svd, "../../../book/src/t-svd.md");
    chapter!(projections, "../../../book/src/projections.md");
    chapter!(random_models, "../../../book/src/random-models.md");
    chapter!(certificate, "../../../book/src/certificate.md");
    chapter!(solver, "../../../book/src/solver.md");
    chapter!(cli, "../../../book/src/cli.md");
}
