use alloc::format;
use alloc::string::{String, ToString};

use crate::error::{Error, Result};

pub const CATALOG_CASES: [&str; 5] = ["dir1", "dir2", "dir3", "dir4", "semidirect"];

/// Which elements are norms, as far as a case needs to know.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormOracle {
    /// `−1 ∈ Nm_{E/F}(E^×)`.
    pub minus_one: Option<bool>,
    /// `y ∈ Nm_{E/F}(E^×)` for the translation class `y` of the semidirect form.
    pub y: Option<bool>,
    /// `a ∈ Nm_{K^σ/F}((K^σ)^×)` where `K^τ = F(√a)`.
    pub a_from_fixed_sigma: Option<bool>,
}

/// Rational points of a form of `G_m × ℤ/2` or `G_m ⋊ ℤ/2`, component by component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub case: String,
    pub twist: String,
    pub galois_action: String,
    pub identity_component: String,
    pub non_identity_component: String,
    pub identity_nonempty: bool,
    pub non_identity_nonempty: bool,
}

impl CatalogEntry {
    pub fn render(&self) -> String {
        format!(
            "case: {}\ntwist: {}\ntwisted action: {}\nidentity component: {}\nnon-identity component: {}\nidentity component nonempty: {}\nnon-identity component nonempty: {}\n",
            self.case,
            self.twist,
            self.galois_action,
            self.identity_component,
            self.non_identity_component,
            self.identity_nonempty,
            self.non_identity_nonempty
        )
    }
}

fn need(v: Option<bool>, what: &str) -> Result<bool> {
    v.ok_or_else(|| Error::Precondition(format!("norm oracle must decide {}", what)))
}

/// The forms of the rank-one disconnected tori with component group `ℤ/2`.
pub fn rank1_catalog(case: &str, norms: &NormOracle) -> Result<CatalogEntry> {
    let e = |twist: &str, action: &str, id: &str, non: &str, non_nonempty: bool| CatalogEntry {
        case: case.to_string(),
        twist: twist.into(),
        galois_action: action.into(),
        identity_component: id.into(),
        non_identity_component: non.into(),
        identity_nonempty: true,
        non_identity_nonempty: non_nonempty,
    };
    match case {
        // x = √d always works
        "dir1" => Ok(e(
            "G_m × Z/2 twisted through E/F onto ⟨μ⟩",
            "σ_z(x,1) = (σ(x),1), σ_z(x,-1) = (-σ(x),-1)",
            "{(x,1) | x ∈ F^×}",
            "{(x,-1) | x ∈ E^×, σ(x) = -x}",
            true,
        )),
        "dir2" => Ok(e(
            "G_m × Z/2 twisted through E/F onto ⟨ω⟩",
            "σ_z(x,±1) = (σ(x)^{-1},±1)",
            "{(x,1) | x ∈ E^×, Nm_{E/F}(x) = 1}",
            "{(x,-1) | x ∈ E^×, Nm_{E/F}(x) = 1}",
            true,
        )),
        // x + σ(x)^{-1} = 0 means Nm_{E/F}(x) = -1
        "dir3" => Ok(e(
            "G_m × Z/2 twisted through E/F onto ⟨μω⟩",
            "σ_z(x,1) = (σ(x)^{-1},1), σ_z(x,-1) = (-σ(x)^{-1},-1)",
            "{(x,1) | x ∈ E^×, Nm_{E/F}(x) = 1}",
            "{(x,-1) | x ∈ E^×, x + σ(x)^{-1} = 0}",
            need(norms.minus_one, "whether -1 is a norm from E")?,
        )),
        // x = √a·w with w ∈ K^σ gives Nm_{K/K^τ}(x) = a·Nm_{K^σ/F}(w)
        "dir4" => Ok(e(
            "G_m × Z/2 twisted through K/F = ⟨σ⟩ × ⟨τ⟩ onto ⟨μ⟩ × ⟨ω⟩",
            "σ_z(x,1) = (σ(x),1), σ_z(x,-1) = (-σ(x),-1), τ_z(x,±1) = (τ(x)^{-1},±1)",
            "{(x,1) | x ∈ (K^σ)^×, Nm_{K^σ/F}(x) = 1}",
            "{(x,-1) | x ∈ K^×, σ(x) = -x, Nm_{K/K^τ}(x) = 1}",
            need(norms.a_from_fixed_sigma, "whether a is a norm from K^σ")?,
        )),
        "semidirect" => Ok(e(
            "G_m ⋊ Z/2 twisted by z''(σ) = (y,ω) through E/F",
            "σ_z''(x,1) = (σ(x)^{-1},1), σ_z''(x,-1) = (yσ(x)^{-1},-1)",
            "{(x,1) | x ∈ E^×, Nm_{E/F}(x) = 1}",
            "{(x,-1) | x ∈ E^×, Nm_{E/F}(x) = y}",
            need(norms.y, "whether y is a norm from E")?,
        )),
        other => Err(Error::Precondition(format!("unknown catalog case {:?}", other))),
    }
}
