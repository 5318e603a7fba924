use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::Result;
use crate::graph::VertexId;

/// Per-instance neighbor cache.
#[derive(Default)]
pub(crate) struct Memo {
    map: RefCell<HashMap<VertexId, Rc<[VertexId]>>>,
}

impl Memo {
    pub fn get_or(&self, v: &VertexId, f: impl FnOnce() -> Result<Vec<VertexId>>) -> Result<Rc<[VertexId]>> {
        if let Some(ns) = self.map.borrow().get(v) {
            return Ok(ns.clone());
        }
        let ns: Rc<[VertexId]> = f()?.into();
        self.map.borrow_mut().insert(v.clone(), ns.clone());
        Ok(ns)
    }
}
