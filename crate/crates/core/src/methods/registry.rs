use std::fmt;
use std::sync::Arc;

use super::{Arena, Branch, Corridor, GenerationMethod, MethodConfig, Star};
use crate::error::{Error, Result};

pub type MethodFactory = Arc<dyn Fn(&MethodConfig) -> Result<Box<dyn GenerationMethod>> + Send + Sync>;

#[derive(Clone)]
pub struct MethodInfo {
    pub kind: String,
    /// Kind-specific parameter names, excluding the shared `starter_con_tol`.
    pub params: Vec<String>,
    factory: MethodFactory,
}

impl fmt::Debug for MethodInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MethodInfo")
            .field("kind", &self.kind)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

/// Generation methods constructible by name, in registration order.
#[derive(Clone, Debug, Default)]
pub struct MethodRegistry {
    entries: Vec<MethodInfo>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        MethodRegistry::default()
    }

    /// Registry holding `arena`, `corridor`, `star` and `branch`.
    pub fn with_builtins() -> Self {
        let mut r = MethodRegistry::empty();
        r.register("arena", &["max_pieces"], |c| Ok(Box::new(Arena::from_config(c)?)))
            .expect("builtin");
        r.register("corridor", &["max_pieces"], |c| Ok(Box::new(Corridor::from_config(c)?)))
            .expect("builtin");
        r.register("star", &["arm_length", "arm_length_var"], |c| {
            Ok(Box::new(Star::from_config(c)?))
        })
        .expect("builtin");
        r.register("branch", &["branch_count", "branch_length", "branch_length_var"], |c| {
            Ok(Box::new(Branch::from_config(c)?))
        })
        .expect("builtin");
        r
    }

    pub fn register<F>(&mut self, kind: &str, params: &[&str], factory: F) -> Result<()>
    where
        F: Fn(&MethodConfig) -> Result<Box<dyn GenerationMethod>> + Send + Sync + 'static,
    {
        if self.get(kind).is_some() {
            return Err(Error::Registry(format!("method `{kind}` is already registered")));
        }
        self.entries.push(MethodInfo {
            kind: kind.to_string(),
            params: params.iter().map(|s| s.to_string()).collect(),
            factory: Arc::new(factory),
        });
        Ok(())
    }

    pub fn get(&self, kind: &str) -> Option<&MethodInfo> {
        self.entries.iter().find(|e| e.kind == kind)
    }

    pub fn entries(&self) -> &[MethodInfo] {
        &self.entries
    }

    pub fn kinds(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.kind.as_str())
    }

    pub fn build(&self, cfg: &MethodConfig) -> Result<Box<dyn GenerationMethod>> {
        let info = self
            .get(&cfg.kind)
            .ok_or_else(|| Error::config(format!("unknown generation method `{}`", cfg.kind)))?;
        (info.factory)(cfg)
    }
}
