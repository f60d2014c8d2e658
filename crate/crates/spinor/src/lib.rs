pub mod bong;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod gmaps;
pub mod groups;
pub mod identities;
pub mod io;
pub mod oracle;
pub mod relative;
pub mod spaces;

/// Schema tag carried by every JSON document.
pub const SCHEMA: &str = "spinor/1";
