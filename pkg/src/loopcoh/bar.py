"""Reduced bar construction of a graded polynomial algebra.

Words are tuples of basis monomials of positive degree; the word
[a_1|...|a_p] sits in degree sum(|a_i| - 1), so the bar differential
raises degree by one and H^n(B) is computed cohomologically.  Elements
are dicts word -> coefficient and need not be homogeneous: twisted
products built from a degree-shifting generator table can mix degrees,
and consumers split into homogeneous parts when that matters.
"""
from __future__ import annotations

import itertools

from .hirsch_ops import HirschOpTable
from .polynomial import AlgebraError, GeneratorSet, Polynomial
from .rings import RingError


class BarError(Exception):
    pass


def _degree(gens: GeneratorSet, mono) -> int:
    return gens.monomial_degree(mono)


def word_degree(gens, word) -> int:
    return sum(_degree(gens, m) - 1 for m in word)


def word_str(gens, word) -> str:
    return "[" + "|".join(gens.monomial_str(m) for m in word) + "]"


def zero_element():
    return {}


def add_into(out, word, coeff, ring):
    cur = ring.add(out.get(word, ring.zero()), coeff)
    if ring.is_zero(cur):
        out.pop(word, None)
    else:
        out[word] = cur
    return out


def add_elements(x, y, ring):
    out = dict(x)
    for word, c in y.items():
        add_into(out, word, c, ring)
    return out


def scale_element(x, c, ring):
    if ring.is_zero(c):
        return {}
    return {w: ring.mul(v, c) for w, v in x.items()}


def element_degrees(gens, x):
    return sorted({word_degree(gens, w) for w in x})


def homogeneous_part(gens, x, n):
    return {w: c for w, c in x.items() if word_degree(gens, w) == n}


def bar_basis(gens: GeneratorSet, degree, max_weight=None):
    """All bar words of the given degree, ordered by weight then by the
    monomial order letterwise.  max_weight caps the word length; degree n
    needs no more than n letters since every letter has degree >= 2."""
    cap = degree if max_weight is None else min(max_weight, degree)
    words = []

    def build(prefix, remaining, slots):
        if slots == 0:
            if remaining == 0:
                words.append(tuple(prefix))
            return
        # each remaining slot consumes at least 1 desuspended degree
        for d in range(2, remaining - (slots - 1) + 2):
            for m in gens.basis_in_degree(d):
                prefix.append(m)
                build(prefix, remaining - (d - 1), slots - 1)
                prefix.pop()

    for weight in range(0 if degree == 0 else 1, cap + 1):
        build([], degree, weight)
    return words


def bar_differential(gens: GeneratorSet, x):
    """Sum of adjacent products with the usual desuspension signs; the
    internal differential of a polynomial algebra is zero."""
    ring = gens.ring
    out = {}
    for word, coeff in x.items():
        e = 0
        for i in range(len(word) - 1):
            e += _degree(gens, word[i]) - 1
            prod = Polynomial.monomial(gens, word[i]) * \
                Polynomial.monomial(gens, word[i + 1])
            sign = ring.one() if e % 2 == 0 else ring.neg(ring.one())
            for mono, c in prod.terms.items():
                new = word[:i] + (mono,) + word[i + 2:]
                add_into(out, new, ring.mul(coeff, ring.mul(sign, c)), ring)
    return out


def muE_product(table: HirschOpTable, x, y):
    """Product of bar elements induced by the operation table: sum over
    simultaneous splittings of both factors into consecutive blocks, each
    mixed block evaluated through E and each pure block a single letter,
    with Koszul signs on desuspended degrees.

    With the trivial table this is the shuffle product.
    """
    gens = table.gens
    ring = gens.ring
    out = {}
    for xw, xc in x.items():
        for yw, yc in y.items():
            base = ring.mul(xc, yc)
            _accumulate_word_product(table, xw, yw, base, out)
    return out


def _accumulate_word_product(table, xw, yw, base, out):
    gens = table.gens
    ring = gens.ring
    p, q = len(xw), len(yw)
    if p == 0:
        add_into(out, yw, base, ring)
        return
    if q == 0:
        add_into(out, xw, base, ring)
        return
    xd = [_degree(gens, m) - 1 for m in xw]
    yd = [_degree(gens, m) - 1 for m in yw]
    xtail = [0] * (p + 1)
    for i in range(p - 1, -1, -1):
        xtail[i] = xtail[i + 1] + xd[i]
    mixed_shapes = table.mixed_shapes(p, q)
    if not mixed_shapes:
        _shuffle_words(ring, xw, yw, xtail, yd, base, out)
        return
    block_cache = {}

    def walk(i, j, letters, par):
        # letters: monomial tuples for pure letters, Polynomials for
        # evaluated mixed blocks
        if i == p and j == q:
            coeff = base if par % 2 == 0 else ring.neg(base)
            _emit_word(gens, letters, coeff, out)
            return
        if i < p:
            letters.append(xw[i])
            walk(i + 1, j, letters, par)
            letters.pop()
        if j < q:
            letters.append(yw[j])
            walk(i, j + 1, letters, par + yd[j] * xtail[i])
            letters.pop()
        for a, b in mixed_shapes:
            if i + a > p or j + b > q:
                continue
            key = (a, b, i, j)
            val = block_cache.get(key)
            if val is None:
                val = table.eval(a, b, list(xw[i:i + a]),
                                 list(yw[j:j + b]))
                block_cache[key] = val
            if val.is_zero():
                continue
            letters.append(val)
            walk(i + a, j + b,
                 letters, par + sum(yd[j:j + b]) * xtail[i + a])
            letters.pop()

    walk(0, 0, [], 0)


def _shuffle_words(ring, xw, yw, xtail, yd, base, out):
    """Pure-shuffle fast path: enumerate interleavings iteratively
    instead of through the splitting recursion."""
    p, q = len(xw), len(yw)
    total = p + q
    acc = {}
    for pos in itertools.combinations(range(total), p):
        word = [None] * total
        i = 0
        k = 0
        par = 0
        for t in range(total):
            if k < p and pos[k] == t:
                word[t] = xw[i]
                i += 1
                k += 1
            else:
                word[t] = yw[t - i]
                par += yd[t - i] * xtail[i]
        w = tuple(word)
        acc[w] = acc.get(w, 0) + (1 if par % 2 == 0 else -1)
    for w, m in acc.items():
        if m == 1:
            add_into(out, w, base, ring)
        elif m == -1:
            add_into(out, w, ring.neg(base), ring)
        elif m:
            add_into(out, w, ring.mul(base, ring.normalize(m)), ring)


def _emit_word(gens, letters, coeff, out):
    """Expand a letters list whose entries are monomial tuples or
    Polynomials into bar words; the all-monomial case stays allocation
    free."""
    ring = gens.ring
    if all(isinstance(l, tuple) for l in letters):
        add_into(out, tuple(letters), coeff, ring)
        return
    expanded = [l.terms.items() if isinstance(l, Polynomial)
                else (((l, ring.one()),)) for l in letters]
    for combo in itertools.product(*expanded):
        c = coeff
        word = []
        for mono, tc in combo:
            c = ring.mul(c, tc)
            word.append(mono)
        add_into(out, tuple(word), c, ring)


def _expand_letters(gens, letters, coeff, out):
    ring = gens.ring
    for combo in itertools.product(*(p.terms.items() for p in letters)):
        c = coeff
        word = []
        for mono, tc in combo:
            c = ring.mul(c, tc)
            word.append(mono)
        add_into(out, tuple(word), c, ring)


def shuffle_product(gens: GeneratorSet, x, y):
    table = HirschOpTable.trivial(gens)
    return muE_product(table, x, y)


def single_letter(gens, poly: Polynomial):
    """The one-letter element [p] of a polynomial, expanded termwise."""
    return {(m,): c for m, c in poly.terms.items()}


def canonical_symmetric_cocycle(gens: GeneratorSet, indices):
    """Sum over all orderings of the given generator multiset of the
    corresponding one-letter-per-generator word, with Koszul signs.

    For a set of distinct generators this is a cocycle over any ring; it
    represents the exterior-generator class attached to that subset.
    """
    ring = gens.ring
    letters = [gens.generator_monomial(i) for i in indices]
    degs = [gens.degrees[i] - 1 for i in indices]
    out = {}
    for perm in itertools.permutations(range(len(letters))):
        word = tuple(letters[i] for i in perm)
        # Koszul sign of the permutation on desuspended degrees
        par = 0
        for a in range(len(perm)):
            for b in range(a + 1, len(perm)):
                if perm[a] > perm[b]:
                    par += degs[perm[a]] * degs[perm[b]]
        coeff = ring.one() if par % 2 == 0 else ring.neg(ring.one())
        add_into(out, word, coeff, ring)
    return out


def corrected_cocycle_small(table: HirschOpTable, indices):
    """Cocycle representative for a set of 2 or 3 distinct generators
    under a nontrivial operation table, correcting the symmetric sum by
    lower-weight words built from E_{1,1} and E_{1,2} values.

    Only characteristic 2 and at most three generators are supported.
    """
    gens = table.gens
    ring = gens.ring
    if ring.char != 2:
        raise BarError("corrected cocycles implemented over F2 only")
    if len(set(indices)) != len(indices):
        raise BarError("generator indices must be distinct")
    k = len(indices)
    polys = [Polynomial.generator(gens, gens.names[i]) for i in indices]
    if k == 1:
        return single_letter(gens, polys[0])
    out = canonical_symmetric_cocycle(gens, indices)
    e11 = lambda a, b: table.eval(1, 1, [a], [b])
    if k == 2:
        a, b = polys
        out = add_elements(out, single_letter(gens, e11(a, b)), ring)
        return out
    if k == 3:
        a1, a2, a3 = polys
        # two-letter words: one cup-one pair and one free letter, summed
        # over the splittings that keep letter blocks increasing
        for (i, j), (l,) in (((0, 1), (2,)), ((0, 2), (1,)),
                             ((1, 2), (0,))):
            pair = e11(polys[i], polys[j])
            free = polys[l]
            for word_elt in (_two_letter(gens, pair, free),
                             _two_letter(gens, free, pair)):
                out = add_elements(out, word_elt, ring)
        # one-letter correction
        corr = e11(a1, e11(a2, a3)) \
            + table.eval(1, 2, [a1], [a2, a3]) \
            + table.eval(1, 2, [a1], [a3, a2])
        out = add_elements(out, single_letter(gens, corr), ring)
        return out
    raise BarError("corrected cocycles for more than 3 generators "
                   "are not implemented")


def _two_letter(gens, p1: Polynomial, p2: Polynomial):
    ring = gens.ring
    out = {}
    for m1, c1 in p1.terms.items():
        for m2, c2 in p2.terms.items():
            add_into(out, (m1, m2), ring.mul(c1, c2), ring)
    return out


def induced_bar_map(src: GeneratorSet, dst: GeneratorSet, images, x):
    """Apply an algebra map (generator -> Polynomial over dst) letterwise
    to a bar element; raises with a witness if a letter's image fails to
    be computable (the map must be defined on every generator)."""
    ring = dst.ring
    out = {}
    for word, coeff in x.items():
        polys = []
        for mono in word:
            img = Polynomial.one(dst)
            for g, e in enumerate(mono):
                if e == 0:
                    continue
                base = images.get(src.names[g])
                if base is None:
                    raise BarError(f"no image for generator {src.names[g]}")
                for _ in range(e):
                    img = img * base
            polys.append(img)
        _expand_letters(dst, polys, coeff, out)
    return out


def check_chain_map(table: HirschOpTable, weight_x, weight_y,
                    degree_bound):
    """Pairs of basis words of the given weights, with total degree at
    most the bound, where the product fails the Leibniz identity
    d(x*y) = dx*y + (-1)^|x| x*dy; returns the violating pairs in
    enumeration order (violations are data, not errors)."""
    gens = table.gens
    ring = gens.ring
    bad = []
    for nx in range(weight_x, degree_bound + 1):
        xs = [w for w in bar_basis(gens, nx) if len(w) == weight_x]
        if not xs:
            continue
        for ny in range(weight_y, degree_bound - nx + 1):
            ys = [w for w in bar_basis(gens, ny) if len(w) == weight_y]
            for xw in xs:
                x = {xw: ring.one()}
                dx = bar_differential(gens, x)
                sign = ring.one() if nx % 2 == 0 \
                    else ring.neg(ring.one())
                for yw in ys:
                    y = {yw: ring.one()}
                    lhs = bar_differential(gens, muE_product(table, x, y))
                    rhs = add_elements(
                        muE_product(table, dx, y),
                        scale_element(muE_product(table, x,
                                                  bar_differential(gens, y)),
                                      sign, ring),
                        ring)
                    diff = add_elements(
                        lhs, scale_element(rhs, ring.neg(ring.one()), ring),
                        ring)
                    if diff:
                        bad.append({"left": word_str(gens, xw),
                                    "right": word_str(gens, yw),
                                    "degrees": (nx, ny)})
    return bad
