//! Case-study inputs shipped with the crate.

use crate::error::{Result, WnkError};

/// The Abilene backbone with its tunnel configuration.
pub const ABILENE: &str = include_str!("../../assets/abilene.json");

/// Two hosts joined by four switches with two parallel paths.
pub const FIG2: &str = include_str!("../../assets/fig2.json");

/// A weighted `dup` loop over a one-packet schema.
pub const DUP_LOOP: &str = include_str!("../../assets/dup_loop.wnk");

pub fn topology(name: &str) -> Result<&'static str> {
    match name {
        "abilene" => Ok(ABILENE),
        "fig2" => Ok(FIG2),
        _ => Err(WnkError::Invalid(format!("no bundled topology `{name}` (try abilene or fig2)"))),
    }
}
