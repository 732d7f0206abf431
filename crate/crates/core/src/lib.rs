//! Exact computations with representations of bound quiver algebras:
//! Hom and Ext¹, morphism categories and their recollement functors,
//! extension-closed subcategories, and cotorsion pairs.

pub mod algebra;
pub mod caps;
pub mod cotorsion;
pub mod error;
pub mod exactlin;
pub mod exstruct;
pub mod morphcat;
pub mod recollement;
pub mod repcat;
pub mod verdict;

pub use algebra::{Algebra, Quiver, Relation};
pub use caps::Caps;
pub use error::{Error, Result};
pub use exactlin::{Field, Mat};
pub use exstruct::{ExCat, Mode, Subcat};
pub use repcat::{Catalog, Conflation, ExtSpace, ModCat, Rep, RepMap};
pub use verdict::{Status, Verdict, Witness};
