//! Anchor strings naming the statement each check exercises. They appear in
//! reports and in failure diagnostics.

pub const TYPE_CONSTRAINTS: &str = "type: t_j = j+1 for j < d, then d >= t_d >= t_{d+1} >= ... >= 0";
pub const JUMPING_INDICES: &str = "jumping indices: e_j = t_{j-1} - t_j for j >= d, sum e_j = d";
pub const STRATUM_DIMENSION: &str = "stratum dimension: n - sum e_j(e_j+1)/2 = n - d - sum e_j(e_j-1)/2";
pub const NORMAL_PATTERN: &str = "normal pattern: strictly decreasing row lengths k_0 > ... > k_{d-1}";
pub const CURVILINEAR: &str = "curvilinear stratum: order 1, dimension n - 1";
pub const MONOMIAL_IDEAL: &str = "monomial ideal (u_0, ..., u_d), u_s = x^{k_s} y^s, lies in the chart";
pub const RESOLUTION_MATRIX: &str = "resolution matrix: (M_P)_ii = -y, (M_P)_(j+1)j = x^{k_{j-1} - k_j}";
pub const BETA_CONSTRAINTS: &str =
    "beta: zero below diagonal, deg beta_ij <= k_{j-1} - k_j - 1, beta_ij(0) = 0 when k_{j-1} + j = k_{i-1} + i";
pub const MINORS_GENERATE: &str = "I(beta) generated by the d x d minors of M_P + beta lies in the chart";
pub const BETA_DIMENSIONS: &str = "chart dimension n_T = n - d - sum e(e-1)/2; shape dimension n_e = (d^2 - sum e^2)/2";
pub const GENERATOR_COUNT: &str = "generator count d + 1 - rank(beta(0))";
pub const GAMMA_FROM_SHAPE: &str = "profile of a shape: Gamma(i) = e_1 + ... + e_k on the (k+1)-th block";
pub const DEGENERACY_NONEMPTY: &str = "degeneracy locus nonempty iff Gamma(k) - k >= R - d for all k";
pub const DEGENERACY_DIMENSION: &str = "degeneracy locus dimension: max rho^Gamma(a) over a with Gamma(a_i) >= i";
pub const ECHELON_REALIZATION: &str = "echelon sequence a is realized iff Gamma(a_i) >= i for all i";
pub const SHAPE_NONEMPTY: &str = "shape-e degeneracy locus nonempty iff R <= d - max e_j";
pub const SHAPE_BOUND: &str = "shape-e dimension bound R(2d - R - 1)/2, equality when length(e) >= R + 1";
pub const TWO_BLOCKS: &str = "two blocks: nonempty iff r <= min(e_1, e_2), dimension r(d - r)";
pub const STRATUM_BN: &str = "Brill-Noether on a stratum: nonempty iff r_min <= r <= d, dim <= n - r(r+1)/2 - (d - r)";
pub const GRASSMANN_STRATUM: &str =
    "Grassmannian stratum: nonempty iff max(l, d - l) <= r <= d, dimension l + r(d - r)";
pub const LOCAL_BN: &str = "local Brill-Noether: rho_loc = n - r(r+1)/2, nonempty iff rho_loc >= 0, dimension rho_loc";
pub const LOCAL_POINT: &str = "rho_loc = 0: the locus is the single point m^r";
pub const LOCAL_VIA_STRATA: &str = "local locus is the union of its intersections with the strata";
pub const GLOBAL_BN: &str = "global Brill-Noether: rho = 2n + 2 - r(r+1), nonempty iff rho >= 2";
pub const MULTIPLICITY_STRATA: &str = "multiplicity strata: dim = 2n + 2 - m - r(r+1)/2 for r(r+1)/2 <= m <= n";
pub const NESTED_RECURSION: &str = "nested recursion: rho_{r-1,n-r} = rho_{r,n}, preimage dim rho_{r,n} - (r'-1)(r'-r)";
pub const VERONESE: &str = "Veronese curve: a_2 - a_1^2 = ... = a_r - a_1 a_{r-1} = 0";
