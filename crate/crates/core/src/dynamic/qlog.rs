//! Forward and reverse query logs.
//!
//! `forward[w]` lists the nodes invoked by the pruned run rooted at `w`,
//! each paired with a handle to the cell recording `w` in that node's
//! reverse list. Reverse lists are intrusive doubly-linked lists threaded
//! through one shared arena, so append and handle removal are `O(1)`.

/// Position of a reverse-list cell in the arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Handle(usize);

#[derive(Debug, Clone)]
struct Cell {
    /// Root whose run made the invocation.
    owner: usize,
    /// Invoked node whose reverse list holds this cell.
    list: usize,
    prev: Option<usize>,
    next: Option<usize>,
    live: bool,
}

#[derive(Debug, Clone)]
pub struct QueryLogs {
    cells: Vec<Cell>,
    free: Vec<usize>,
    head: Vec<Option<usize>>,
    tail: Vec<Option<usize>>,
    len: Vec<usize>,
    forward: Vec<Vec<(usize, Handle)>>,
}

impl QueryLogs {
    pub fn new(n: usize) -> Self {
        QueryLogs {
            cells: Vec::new(),
            free: Vec::new(),
            head: vec![None; n],
            tail: vec![None; n],
            len: vec![0; n],
            forward: vec![Vec::new(); n],
        }
    }

    fn append(&mut self, list: usize, owner: usize) -> Handle {
        let cell = Cell {
            owner,
            list,
            prev: self.tail[list],
            next: None,
            live: true,
        };
        let idx = match self.free.pop() {
            Some(i) => {
                self.cells[i] = cell;
                i
            }
            None => {
                self.cells.push(cell);
                self.cells.len() - 1
            }
        };
        match self.tail[list] {
            Some(t) => self.cells[t].next = Some(idx),
            None => self.head[list] = Some(idx),
        }
        self.tail[list] = Some(idx);
        self.len[list] += 1;
        Handle(idx)
    }

    fn unlink(&mut self, h: Handle, list: usize, owner: usize) {
        let cell = &self.cells[h.0];
        if !cell.live || cell.list != list || cell.owner != owner {
            panic!("query log corrupted: dangling handle {h:?} for ({owner} -> {list})");
        }
        let (prev, next) = (cell.prev, cell.next);
        match prev {
            Some(p) => self.cells[p].next = next,
            None => self.head[list] = next,
        }
        match next {
            Some(x) => self.cells[x].prev = prev,
            None => self.tail[list] = prev,
        }
        self.len[list] -= 1;
        self.cells[h.0].live = false;
        self.free.push(h.0);
    }

    /// Drops every entry of `forward[w]` together with its reverse cell.
    pub fn clear(&mut self, w: usize) {
        for (u, h) in std::mem::take(&mut self.forward[w]) {
            self.unlink(h, u, w);
        }
    }

    /// Records the (deduplicated) invocations of the run rooted at `w`.
    /// The forward log of `w` must be empty.
    pub fn record(&mut self, w: usize, invoked: &[usize]) {
        debug_assert!(self.forward[w].is_empty());
        let mut entries = Vec::with_capacity(invoked.len());
        for &u in invoked {
            debug_assert!(u != w);
            entries.push((u, self.append(u, w)));
        }
        self.forward[w] = entries;
    }

    /// Nodes invoked by the run rooted at `w`.
    pub fn forward(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.forward[w].iter().map(|&(u, _)| u)
    }

    pub fn forward_len(&self, w: usize) -> usize {
        self.forward[w].len()
    }

    pub fn invoked(&self, w: usize, u: usize) -> bool {
        self.forward[w].iter().any(|&(x, _)| x == u)
    }

    /// Roots whose runs invoked `u`, in append order.
    pub fn reverse(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len[u]);
        let mut cur = self.head[u];
        while let Some(i) = cur {
            out.push(self.cells[i].owner);
            cur = self.cells[i].next;
        }
        out
    }

    pub fn reverse_len(&self, u: usize) -> usize {
        self.len[u]
    }

    /// Full cross-scan of both directions.
    pub fn check_consistency(&self) -> Result<(), String> {
        let n = self.forward.len();
        for w in 0..n {
            for &(u, h) in &self.forward[w] {
                let cell = self
                    .cells
                    .get(h.0)
                    .ok_or(format!("handle {h:?} out of arena"))?;
                if !cell.live || cell.owner != w || cell.list != u {
                    return Err(format!("forward entry ({w} -> {u}) has a stale handle"));
                }
            }
        }
        for u in 0..n {
            let rev = self.reverse(u);
            if rev.len() != self.len[u] {
                return Err(format!("reverse list of {u} has wrong length"));
            }
            for w in rev {
                if w == u || !self.invoked(w, u) {
                    return Err(format!(
                        "reverse entry {w} in list of {u} has no forward entry"
                    ));
                }
            }
            let mut back = Vec::new();
            let mut cur = self.tail[u];
            while let Some(i) = cur {
                back.push(self.cells[i].owner);
                cur = self.cells[i].prev;
            }
            back.reverse();
            if back != self.reverse(u) {
                return Err(format!("reverse list of {u} is not doubly linked"));
            }
        }
        Ok(())
    }
}
