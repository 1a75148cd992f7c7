//! Instance caps and evaluation budgets.
//!
//! Every operation that can blow up takes its cap from one [`RunConfig`]
//! record, so a single CLI flag set controls the whole run.

/// Budget for fast-growing-hierarchy evaluation.
///
/// F_3 already escapes any practical budget for arguments >= 3, so the
/// failure mode has to be a clean error rather than an OOM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FghBudget {
    /// Maximum bit width of any intermediate or final value.
    pub max_result_bits: u64,
    /// Maximum number of recursive F-applications.
    pub max_recursive_steps: u64,
}

impl Default for FghBudget {
    fn default() -> Self {
        FghBudget {
            max_result_bits: 1 << 16,
            max_recursive_steps: 1_000_000,
        }
    }
}

impl FghBudget {
    pub fn new(max_result_bits: u64, max_recursive_steps: u64) -> Self {
        assert!(max_result_bits > 0 && max_recursive_steps > 0);
        FghBudget {
            max_result_bits,
            max_recursive_steps,
        }
    }
}

/// Caps, budgets and the seed for one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// Maximum number of states in any relation or explored system.
    pub states_cap: usize,
    /// Maximum number of edges; transitive closure refuses when
    /// `|domain|^2` exceeds this.
    pub edges_cap: usize,
    /// Node budget for backtracking and partition searches.
    pub search_cap: u64,
    /// Vertex cap for exact clique-type searches (homogeneous sets,
    /// antichains).
    pub clique_cap: usize,
    /// Element cap for exhaustive k-largeness partition search.
    pub klarge_cap: usize,
    /// Element cap for m-density coloring enumeration (m >= 1).
    pub dense_cap: usize,
    /// State cap for the n-depth linear-boundedness checker.
    pub depth_cap: usize,
    /// Domain cap for the exact longest-H-sequence search.
    pub hseq_cap: usize,
    /// Fast-growing-hierarchy budget.
    pub fgh: FghBudget,
    /// Seed for any randomized helper; fixed default keeps runs reproducible.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            states_cap: 10_000,
            edges_cap: 100_000,
            search_cap: 2_000_000,
            clique_cap: 20,
            klarge_cap: 16,
            dense_cap: 8,
            depth_cap: 12,
            hseq_cap: 64,
            fgh: FghBudget::default(),
            seed: 0,
        }
    }
}
