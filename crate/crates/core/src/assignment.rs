//! Association state between access points and clients.

/// A partial many-to-one association: every client is held by at most one
/// access point, while an access point may hold any number of clients.
///
/// The association is feasible for the multi-assignment problem once every
/// client is assigned and every access point holds at least one client.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    ap_of_client: Vec<Option<usize>>,
    clients_of_ap: Vec<Vec<usize>>,
}

impl Assignment {
    pub fn empty(ap_count: usize, client_count: usize) -> Self {
        Assignment {
            ap_of_client: vec![None; client_count],
            clients_of_ap: vec![Vec::new(); ap_count],
        }
    }

    pub fn ap_count(&self) -> usize {
        self.clients_of_ap.len()
    }

    pub fn client_count(&self) -> usize {
        self.ap_of_client.len()
    }

    pub fn ap_of(&self, client: usize) -> Option<usize> {
        self.ap_of_client[client]
    }

    /// Clients currently held by `ap`, in ascending index order.
    pub fn clients_of(&self, ap: usize) -> &[usize] {
        &self.clients_of_ap[ap]
    }

    pub fn load(&self, ap: usize) -> usize {
        self.clients_of_ap[ap].len()
    }

    /// Binds `client` to `ap`, displacing any previous holder of the client.
    /// Returns the displaced access point, if any.
    pub fn assign(&mut self, ap: usize, client: usize) -> Option<usize> {
        let previous = self.unassign(client);
        self.ap_of_client[client] = Some(ap);
        let clients = &mut self.clients_of_ap[ap];
        let pos = clients.partition_point(|&c| c < client);
        clients.insert(pos, client);
        previous
    }

    /// Releases `client` and returns the access point that held it.
    pub fn unassign(&mut self, client: usize) -> Option<usize> {
        let ap = self.ap_of_client[client].take()?;
        self.clients_of_ap[ap].retain(|&c| c != client);
        Some(ap)
    }

    pub fn assigned_count(&self) -> usize {
        self.ap_of_client.iter().filter(|a| a.is_some()).count()
    }

    /// True once every client is assigned and no access point is left empty.
    pub fn is_feasible(&self) -> bool {
        self.ap_of_client.iter().all(|a| a.is_some())
            && self.clients_of_ap.iter().all(|c| !c.is_empty())
    }

    /// All `(ap, client)` pairs, ordered by access point then client.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.assigned_count());
        for (ap, clients) in self.clients_of_ap.iter().enumerate() {
            for &client in clients {
                out.push((ap, client));
            }
        }
        out
    }

    pub fn from_pairs(
        ap_count: usize,
        client_count: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut assignment = Assignment::empty(ap_count, client_count);
        for (ap, client) in pairs {
            assignment.assign(ap, client);
        }
        assignment
    }
}
