/// Resource budgets and enumeration caps.
///
/// All caps are configuration values with the documented defaults;
/// exceeding a cap is reported as an error, never silently sampled or
/// truncated.
#[derive(Debug, Clone)]
pub struct Config {
    /// Maximum group order accepted by closure/table constructors.
    pub order_cap: usize,
    /// Associativity and homomorphism laws are checked exhaustively up
    /// to this order; above it, `assoc_samples` random triples are used.
    pub exhaustive_check_cap: usize,
    /// Number of sampled triples for the associativity check above the
    /// exhaustive cap.
    pub assoc_samples: usize,
    /// Subgroup / maximal-subgroup / normal-subgroup enumeration cap.
    pub subgroup_enum_cap: usize,
    /// Bar complex group-order cap. The default admits the slow A5-size
    /// runs; interactive callers may lower it.
    pub bar_cap: usize,
    /// Brute-force class enumeration budget: `|G| <= class_g`,
    /// `|Γ| <= class_gamma`, `|A| <= class_a`.
    pub class_g: usize,
    pub class_gamma: usize,
    pub class_a: usize,
    /// Brute-force section / lift search budget on `|Γ|`.
    pub section_cap: usize,
    /// Brute-force f-extension map search budget on the total group.
    pub map_search_cap: usize,
    /// Order cap on tower stages (realizes finiteness of the tower as a
    /// concrete resource bound).
    pub tower_order_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            order_cap: 10_000,
            exhaustive_check_cap: 256,
            assoc_samples: 100_000,
            subgroup_enum_cap: 512,
            bar_cap: 64,
            class_g: 8,
            class_gamma: 8,
            class_a: 4,
            section_cap: 64,
            map_search_cap: 512,
            tower_order_cap: 10_000,
        }
    }
}

impl Config {
    /// Default configuration with the bar cap raised for slow runs
    /// (orders up to `cap`, e.g. 60 for the alternating group A5 or 120
    /// for its double cover).
    pub fn slow(cap: usize) -> Self {
        Config { bar_cap: cap, ..Config::default() }
    }
}
