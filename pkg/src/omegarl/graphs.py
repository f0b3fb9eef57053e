"""Small graph helpers shared by the automata pipeline and the solvers."""


def strongly_connected_components(succ):
    """Tarjan's algorithm, iterative.  `succ` maps node -> iterable of nodes.

    Returns a list of components (lists of nodes) in reverse topological
    order (every edge leaving a component points to an earlier entry).
    """
    index = {}
    lowlink = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]

    for root in succ:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = lowlink[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                lowlink[u] = min(lowlink[u], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def reachable_from(succ, roots):
    """Forward reachability over a successor map."""
    seen = set(roots)
    queue = list(roots)
    while queue:
        v = queue.pop()
        for w in succ.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen
