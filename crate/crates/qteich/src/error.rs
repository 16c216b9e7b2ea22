use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The order of the root of unity must be odd so that squaring is a
    /// bijection on exponents.
    #[error("order {n} is even; only odd orders admit a consistent half-integer power table")]
    EvenN { n: i64 },

    /// An operator or basis request referenced a tensor factor that the
    /// state space does not contain.
    #[error("site {site} is not a tensor factor of this state space")]
    UnknownSite { site: usize },

    /// Functional calculus needs X^N = Id; the input failed that test.
    #[error("operator is not cyclic: |X^N - Id| = {defect:.3e} exceeds the allowance {allowance:.3e}")]
    NotCyclic { defect: f64, allowance: f64 },

    /// The principal section of the Fermat curve blows up at this ratio.
    #[error("section pole: |1 + y^N| = {magnitude:.3e} is below the degeneracy floor")]
    SectionPole { magnitude: f64 },

    /// A curve point (or a sampled ratio) sits on a branch cut or makes a
    /// dilogarithm factor vanish.
    #[error("degenerate parameter: {reason}")]
    DegenerateParameter { reason: String },

    /// No built-in surface with the requested name.
    #[error("unknown surface `{name}`")]
    UnknownSurface { name: String },

    /// A triangle listed the same edge twice.
    #[error("triangle {triangle} is glued to itself along edge {edge}")]
    SelfFolded { triangle: usize, edge: usize },

    /// A flip was requested, but the dots of the two triangles are not in
    /// the configuration the move requires.
    #[error("dot position mismatch: flip at edge {edge} needs the dots adjacent to it from triangles {t1} and {t2}")]
    DotPositionMismatch { edge: usize, t1: usize, t2: usize },

    /// A flip was requested across an edge the two triangles do not share.
    #[error("edge {edge} is not shared by triangles {t1} and {t2}")]
    NotAdjacent { edge: usize, t1: usize, t2: usize },

    /// A flip was requested at a boundary edge.
    #[error("edge {edge} lies on the boundary and cannot be flipped")]
    BoundaryFlip { edge: usize },

    /// No built-in mapping class with the requested name.
    #[error("unknown mapping class `{name}`")]
    UnknownMapClass { name: String },

    /// A flip was requested at an edge whose coefficient is frozen.
    #[error("edge {edge} carries the frozen coefficient and cannot be flipped")]
    FrozenFlip { edge: usize },

    /// The coefficient tuple is not invariant under the mapping class, so
    /// no intertwiner exists for it.
    #[error("coefficient tuple is not invariant under the mapping class: {reason}")]
    NotInvariant { reason: String },

    /// An edge path is not realizable on the dual graph of the
    /// triangulation.
    #[error("invalid edge path: {reason}")]
    InvalidPath { reason: String },

    /// Polarization generators must commute before they can be jointly
    /// diagonalized.
    #[error("polarization generators {i} and {j} do not commute: |[h_i,h_j]| = {defect:.3e}")]
    NonCommutingGenerators { i: usize, j: usize, defect: f64 },

    /// The requested joint character cuts out the zero subspace.
    #[error("the requested character selects the zero subspace")]
    EmptyCharacter,

    /// An operator was expected to preserve a polarized subspace and did
    /// not.
    #[error("operator does not map the polarized subspace into its target: residual {residual:.3e}")]
    SubspaceMismatch { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
