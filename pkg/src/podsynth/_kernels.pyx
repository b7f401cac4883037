# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort as csort

cnp.import_array()


def bfs_multi(indptr, indices, sources):
    cdef long[:] ip = np.ascontiguousarray(indptr, dtype=np.int64).astype(np.int_)
    cdef int[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef long[:] src = np.ascontiguousarray(sources, dtype=np.int_)
    cdef Py_ssize_t n = ip.shape[0] - 1
    out = np.full(n, -1, dtype=np.int32)
    cdef int[:] dist = out
    cdef vector[int] q
    cdef Py_ssize_t head = 0, k, i
    cdef int u, v, du
    for i in range(src.shape[0]):
        u = <int>src[i]
        if dist[u] < 0:
            dist[u] = 0
            q.push_back(u)
    while head < <Py_ssize_t>q.size():
        u = q[head]
        head += 1
        du = dist[u] + 1
        for k in range(ip[u], ip[u + 1]):
            v = ix[k]
            if dist[v] < 0:
                dist[v] = du
                q.push_back(v)
    return out


def apsp_bfs(indptr, indices):
    cdef long[:] ip = np.ascontiguousarray(indptr, dtype=np.int64).astype(np.int_)
    cdef int[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = ip.shape[0] - 1
    out = np.full((n, n), -1, dtype=np.int32)
    cdef int[:, :] dist = out
    cdef vector[int] q
    cdef Py_ssize_t s, head, k
    cdef int u, v, du
    q.reserve(n)
    for s in range(n):
        q.clear()
        q.push_back(<int>s)
        dist[s, s] = 0
        head = 0
        while head < <Py_ssize_t>q.size():
            u = q[head]
            head += 1
            du = dist[s, u] + 1
            for k in range(ip[u], ip[u + 1]):
                v = ix[k]
                if dist[s, v] < 0:
                    dist[s, v] = du
                    q.push_back(v)
    return out


cdef bint _erase(vector[int]& vec, int x):
    cdef Py_ssize_t i
    for i in range(<Py_ssize_t>vec.size()):
        if vec[i] == x:
            vec[i] = vec.back()
            vec.pop_back()
            return True
    return False


cdef bint _contains(vector[int]& vec, int x):
    cdef Py_ssize_t i
    for i in range(<Py_ssize_t>vec.size()):
        if vec[i] == x:
            return True
    return False


cdef class DynamicDAG:
    """Directed graph kept acyclic under edge insertions (Pearce-Kelly ordering)."""

    cdef vector[vector[int]] _out
    cdef vector[vector[int]] _inc
    cdef vector[int] _ord
    cdef vector[int] _at
    cdef vector[char] _mark
    cdef readonly int n
    cdef readonly long num_edges

    def __cinit__(self, int n):
        cdef int i
        self.n = n
        self.num_edges = 0
        self._out.resize(n)
        self._inc.resize(n)
        self._ord.resize(n)
        self._at.resize(n)
        self._mark.resize(n, 0)
        for i in range(n):
            self._ord[i] = i
            self._at[i] = i

    def has_edge(self, int u, int v):
        return _contains(self._out[u], v)

    def add_edge(self, int u, int v):
        cdef int lb, ub, x, w, ow
        cdef Py_ssize_t i, k
        cdef vector[int] stack, fwd, bwd
        cdef vector[long] keyed
        cdef vector[int] slots
        if _contains(self._out[u], v):
            return True
        if u == v:
            return False
        lb = self._ord[v]
        ub = self._ord[u]
        if lb < ub:
            stack.push_back(v)
            self._mark[v] = 1
            while stack.size():
                x = stack.back()
                stack.pop_back()
                fwd.push_back(x)
                for i in range(<Py_ssize_t>self._out[x].size()):
                    w = self._out[x][i]
                    ow = self._ord[w]
                    if ow == ub:
                        for k in range(<Py_ssize_t>fwd.size()):
                            self._mark[fwd[k]] = 0
                        for k in range(<Py_ssize_t>stack.size()):
                            self._mark[stack[k]] = 0
                        return False
                    if not self._mark[w] and ow < ub:
                        self._mark[w] = 1
                        stack.push_back(w)
            stack.push_back(u)
            self._mark[u] = 2
            while stack.size():
                x = stack.back()
                stack.pop_back()
                bwd.push_back(x)
                for i in range(<Py_ssize_t>self._inc[x].size()):
                    w = self._inc[x][i]
                    if self._mark[w] != 2 and self._ord[w] > lb:
                        self._mark[w] = 2
                        stack.push_back(w)
            # sort each set by current order, then hand out the pooled slots
            for k in range(<Py_ssize_t>bwd.size()):
                keyed.push_back((<long>self._ord[bwd[k]] << 32) | bwd[k])
            csort(keyed.begin(), keyed.end())
            for k in range(<Py_ssize_t>bwd.size()):
                bwd[k] = <int>(keyed[k] & 0xffffffff)
            keyed.clear()
            for k in range(<Py_ssize_t>fwd.size()):
                keyed.push_back((<long>self._ord[fwd[k]] << 32) | fwd[k])
            csort(keyed.begin(), keyed.end())
            for k in range(<Py_ssize_t>fwd.size()):
                fwd[k] = <int>(keyed[k] & 0xffffffff)
            for k in range(<Py_ssize_t>bwd.size()):
                slots.push_back(self._ord[bwd[k]])
            for k in range(<Py_ssize_t>fwd.size()):
                slots.push_back(self._ord[fwd[k]])
            csort(slots.begin(), slots.end())
            for k in range(<Py_ssize_t>bwd.size()):
                x = bwd[k]
                self._ord[x] = slots[k]
                self._at[slots[k]] = x
                self._mark[x] = 0
            for k in range(<Py_ssize_t>fwd.size()):
                x = fwd[k]
                self._ord[x] = slots[bwd.size() + k]
                self._at[slots[bwd.size() + k]] = x
                self._mark[x] = 0
        self._out[u].push_back(v)
        self._inc[v].push_back(u)
        self.num_edges += 1
        return True

    def remove_edge(self, int u, int v):
        if _erase(self._out[u], v):
            _erase(self._inc[v], u)
            self.num_edges -= 1

    def order(self):
        return np.asarray([self._at[i] for i in range(self.n)], dtype=np.int64)
