# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twin of membership_py.search_derivation.

Same encoding, same breadth-first order, same returns; only the inner
matching loop is lowered to C. Keep the two files in sync.
"""

from collections import deque

from cpython.bytes cimport (
    PyBytes_AS_STRING,
    PyBytes_FromStringAndSize,
    PyBytes_GET_SIZE,
)
from libc.string cimport memcmp, memcpy

FOUND = 1
EXHAUSTED = 0
OVER_BUDGET = -1


def search_derivation(productions, bytes start, bytes target, long long budget):
    """Breadth-first search for a derivation start =>* target.

    Returns (status, explored); see membership_py for the contract.
    """
    cdef Py_ssize_t tlen = PyBytes_GET_SIZE(target)
    if PyBytes_GET_SIZE(start) > tlen:
        return (EXHAUSTED, 0)
    if start == target:
        return (FOUND, 1)

    # Index productions by their first one or two symbols.
    cdef list one_lists = [None] * 65536
    cdef dict two_map = {}
    cdef list lhs_list = []
    cdef list rhs_list = []
    cdef Py_ssize_t pid = 0
    cdef bytes lhs, rhs
    cdef const unsigned char* lb
    cdef unsigned int key1
    cdef unsigned long long key2
    cdef list bucket
    for lhs, rhs in productions:
        lhs_list.append(lhs)
        rhs_list.append(rhs)
        lb = <const unsigned char*> PyBytes_AS_STRING(lhs)
        if PyBytes_GET_SIZE(lhs) == 2:
            key1 = lb[0] | (lb[1] << 8)
            if one_lists[key1] is None:
                one_lists[key1] = []
            bucket = one_lists[key1]
            bucket.append(pid)
        else:
            key2 = (
                lb[0]
                | (<unsigned long long> lb[1] << 8)
                | (<unsigned long long> lb[2] << 16)
                | (<unsigned long long> lb[3] << 24)
            )
            if key2 in two_map:
                bucket = two_map[key2]
            else:
                bucket = []
                two_map[key2] = bucket
            bucket.append(pid)
        pid += 1

    cdef set visited = {start}
    queue = deque()
    queue.append(start)
    cdef bytes form, successor, cand_lhs, cand_rhs
    cdef const unsigned char* fbuf
    cdef char* dst
    cdef Py_ssize_t flen, i, llen, rlen, newlen, which
    cdef long long visited_count = 1
    cdef object probe
    while queue:
        form = queue.popleft()
        flen = PyBytes_GET_SIZE(form)
        fbuf = <const unsigned char*> PyBytes_AS_STRING(form)
        for i in range(0, flen, 2):
            for which in range(2):
                if which == 0:
                    key1 = fbuf[i] | (fbuf[i + 1] << 8)
                    probe = one_lists[key1]
                else:
                    if i + 4 > flen:
                        break
                    key2 = (
                        fbuf[i]
                        | (<unsigned long long> fbuf[i + 1] << 8)
                        | (<unsigned long long> fbuf[i + 2] << 16)
                        | (<unsigned long long> fbuf[i + 3] << 24)
                    )
                    probe = two_map.get(key2)
                if probe is None:
                    continue
                bucket = <list> probe
                for pid_obj in bucket:
                    pid = pid_obj
                    cand_lhs = <bytes> lhs_list[pid]
                    llen = PyBytes_GET_SIZE(cand_lhs)
                    if llen > flen - i:
                        continue
                    if llen > 4 and memcmp(
                        PyBytes_AS_STRING(cand_lhs) + 4, fbuf + i + 4, llen - 4
                    ) != 0:
                        continue
                    cand_rhs = <bytes> rhs_list[pid]
                    rlen = PyBytes_GET_SIZE(cand_rhs)
                    newlen = flen - llen + rlen
                    if newlen > tlen:
                        continue
                    successor = PyBytes_FromStringAndSize(NULL, newlen)
                    dst = PyBytes_AS_STRING(successor)
                    memcpy(dst, fbuf, i)
                    memcpy(dst + i, PyBytes_AS_STRING(cand_rhs), rlen)
                    memcpy(
                        dst + i + rlen, fbuf + i + llen, flen - i - llen
                    )
                    if successor in visited:
                        continue
                    if successor == target:
                        return (FOUND, visited_count + 1)
                    if visited_count >= budget:
                        return (OVER_BUDGET, visited_count)
                    visited.add(successor)
                    visited_count += 1
                    queue.append(successor)
    return (EXHAUSTED, visited_count)
