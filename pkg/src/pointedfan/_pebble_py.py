"""Pure-Python (k, l)-pebble game; the reference for the compiled kernel."""


def pebble_game(n, edges, k=2, l=3):
    """Run the pebble game over ``edges`` in the given order.

    ``edges`` holds integer pairs over ``range(n)``. Returns one flag per
    edge: True if accepted (independent of the earlier accepted edges).
    Each vertex keeps the invariant ``pebbles + out_degree == k``.
    """
    pebbles = [k] * n
    out = [[] for _ in range(n)]
    accepted = []
    need = l + 1

    def gather(start, keep):
        # depth-first search for a free pebble reachable from ``start``
        parent = {start: None, keep: None}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if pebbles[y] > 0:
                    # reverse the path y <- ... <- start
                    pebbles[y] -= 1
                    pebbles[start] += 1
                    child = y
                    while parent[child] is not None:
                        par = parent[child]
                        out[par].remove(child)
                        out[child].append(par)
                        child = par
                    return True
                stack.append(y)
        return False

    for u, v in edges:
        if u == v:
            accepted.append(False)
            continue
        while pebbles[u] + pebbles[v] < need:
            if pebbles[u] < k and gather(u, v):
                continue
            if pebbles[v] < k and gather(v, u):
                continue
            break
        if pebbles[u] + pebbles[v] >= need:
            tail = u if pebbles[u] > 0 else v
            head = v if tail == u else u
            pebbles[tail] -= 1
            out[tail].append(head)
            accepted.append(True)
        else:
            accepted.append(False)
    return accepted
