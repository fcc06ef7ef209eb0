//! Machine-readable errors with stable codes and exit statuses.

use rephom::cotangent::CotangentError;
use rephom::fox::FoxError;
use rephom::koszul::KoszulError;
use rephom::liegroups::LieError;
use rephom::spaces::SpaceError;
use serde::Serialize;

/// `code` is stable; its prefix fixes the exit status: `config.*` → 2,
/// `math.*` → 3, `budget.*` → 4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            line: None,
            column: None,
        }
    }

    pub fn at(mut self, line: usize, column: usize) -> Self {
        self.line = Some(line);
        self.column = Some(column);
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.code.split('.').next() {
            Some("math") => 3,
            Some("budget") => 4,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let body = serde_json::json!({ "error": self, "exit_code": self.exit_code() });
        serde_json::to_string_pretty(&body).expect("errors serialize")
    }

    pub fn to_text(&self) -> String {
        match (self.line, self.column) {
            (Some(l), Some(c)) => format!("error[{}]: {} (line {l}, column {c})", self.code, self.message),
            _ => format!("error[{}]: {}", self.code, self.message),
        }
    }
}

impl From<FoxError> for CliError {
    fn from(e: FoxError) -> Self {
        let code = match e {
            FoxError::Parse { .. } => "config.parse",
            FoxError::RelatorViolated { .. } => "math.relator_violated",
            FoxError::MissingGenerator { .. } | FoxError::OutOfRange { .. } => "config.rep",
        };
        Self::new(code, e.to_string())
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::Parse { .. } | SpaceError::Invalid(_) => Self::new("config.space", e.to_string()),
            SpaceError::Unsupported { .. } => Self::new("config.unsupported", e.to_string()),
            SpaceError::Fox(f) => f.into(),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        let code = match e {
            LieError::Parse(_) => "config.group",
            _ => "config.rep",
        };
        Self::new(code, e.to_string())
    }
}

impl From<CotangentError> for CliError {
    fn from(e: CotangentError) -> Self {
        let message = e.to_string();
        match e {
            CotangentError::Fox(f) => f.into(),
            CotangentError::Space(s) => s.into(),
            CotangentError::Exact(_) => Self::new("math.complex_invalid", message),
            CotangentError::WrongArity { .. } | CotangentError::GroupMismatch { .. } => {
                Self::new("config.rep", message)
            }
            CotangentError::OrderViolated { .. } => Self::new("math.order_violated", message),
            CotangentError::FixedPointViolated { .. } => Self::new("math.fixed_point_violated", message),
            CotangentError::NoSampler { .. } => Self::new("config.no_sampler", message),
        }
    }
}

impl From<KoszulError> for CliError {
    fn from(e: KoszulError) -> Self {
        let code = match e {
            KoszulError::BudgetExceeded { .. } => "budget.exceeded",
            KoszulError::Unsupported(_) => "config.unsupported",
        };
        Self::new(code, e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_prefix() {
        assert_eq!(CliError::new("config.space", "x").exit_code(), 2);
        assert_eq!(CliError::new("math.order_violated", "x").exit_code(), 3);
        assert_eq!(CliError::new("budget.exceeded", "x").exit_code(), 4);
    }

    #[test]
    fn text_includes_position() {
        let e = CliError::new("config.toml", "bad key").at(3, 7);
        assert_eq!(e.to_text(), "error[config.toml]: bad key (line 3, column 7)");
        assert!(e.to_json().contains("\"line\": 3"));
    }
}
