//! Cooperative cancellation for the search.
//!
//! Tokens form a tree: cancelling a token cancels everything below it, and a
//! deadline on the root covers the whole search. Every loop in the engine
//! checks its token at the head, so sibling tasks stop soon after a winning
//! candidate or a timeout.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

/// Marker for a search aborted by cancellation rather than exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cancelled;

#[derive(Clone)]
pub struct CancelToken {
    inner: Arc<Inner>,
}

struct Inner {
    flag: AtomicBool,
    parent: Option<Arc<Inner>>,
    deadline: Option<Instant>,
}

impl CancelToken {
    pub fn new(deadline: Option<Instant>) -> Self {
        CancelToken {
            inner: Arc::new(Inner {
                flag: AtomicBool::new(false),
                parent: None,
                deadline,
            }),
        }
    }

    /// A token that never cancels.
    pub fn none() -> Self {
        Self::new(None)
    }

    /// A child observing this token's cancellation but individually
    /// cancellable without affecting the parent.
    pub fn child(&self) -> Self {
        CancelToken {
            inner: Arc::new(Inner {
                flag: AtomicBool::new(false),
                parent: Some(self.inner.clone()),
                deadline: None,
            }),
        }
    }

    pub fn cancel(&self) {
        self.inner.flag.store(true, Ordering::Release);
    }

    pub fn is_cancelled(&self) -> bool {
        let mut node = Some(&self.inner);
        while let Some(n) = node {
            if n.flag.load(Ordering::Acquire) {
                return true;
            }
            if let Some(d) = n.deadline {
                if Instant::now() >= d {
                    return true;
                }
            }
            node = n.parent.as_ref();
        }
        false
    }

    pub fn check(&self) -> Result<(), Cancelled> {
        if self.is_cancelled() {
            Err(Cancelled)
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn child_observes_parent_not_vice_versa() {
        let parent = CancelToken::none();
        let child = parent.child();
        child.cancel();
        assert!(child.is_cancelled());
        assert!(!parent.is_cancelled());

        let parent = CancelToken::none();
        let child = parent.child();
        parent.cancel();
        assert!(child.is_cancelled());
    }

    #[test]
    fn deadline_in_the_past_cancels() {
        let t = CancelToken::new(Some(Instant::now() - Duration::from_millis(1)));
        assert_eq!(t.check(), Err(Cancelled));
        assert!(t.child().is_cancelled());
    }
}
