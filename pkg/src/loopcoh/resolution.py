"""Free multiplicative resolution of a polynomial algebra by a tensor
algebra T(V) with E-operation and cup-two generators.

Letters (generators of V) are hashable tuples:
  ("v", i)                  degree-0 polynomial generator i
  ("E", p, q, args)         operation letter; args is a tuple of p+q
                            nonempty words, the first p on the left
  ("C", (i1 <= i2 <= ...))  cup-two cluster of >= 2 degree-0 letters

A word is a tuple of letters; an element is a dict word -> coefficient.
Resolution degree is <= 0, internal degree matches H, and total degree
(their sum) drives all Koszul signs.
"""
from __future__ import annotations

import itertools

from .hirsch_ops import HirschOpTable, MissingOperation
from .polynomial import AlgebraError, GeneratorSet, Polynomial, Sq1Table
from .rings import RingError


class ResolutionError(Exception):
    pass


NORMALIZE_STEP_CAP = 5000


# ---------------------------------------------------------------------------
# letters, words, degrees

def v_letter(i):
    return ("v", i)


def cup_letter(indices):
    idx = tuple(sorted(indices))
    if len(idx) < 2:
        raise ResolutionError("cup clusters need at least 2 entries")
    return ("C", idx)


def e_letter(largs, rargs):
    largs, rargs = tuple(largs), tuple(rargs)
    if not largs or not rargs:
        raise ResolutionError("E letters need arguments on both sides")
    if any(not w for w in largs + rargs):
        raise ResolutionError("empty word argument in E letter")
    return ("E", len(largs), len(rargs), largs + rargs)


def e_args(letter):
    _, p, q, args = letter
    return args[:p], args[p:]


def make_E_word(largs, rargs):
    """E applied to word arguments, with the identity and degenerate
    collapses: returns a word, or None when the result is zero."""
    largs, rargs = tuple(largs), tuple(rargs)
    if any(not w for w in largs + rargs):
        return None
    p, q = len(largs), len(rargs)
    if p == 1 and q == 0:
        return largs[0]
    if p == 0 and q == 1:
        return rargs[0]
    if q == 0 or p == 0:
        return None
    return (e_letter(largs, rargs),)


def letter_bidegree(gens: GeneratorSet, letter):
    kind = letter[0]
    if kind == "v":
        return (0, gens.degrees[letter[1]])
    if kind == "C":
        idx = letter[1]
        return (-2 * (len(idx) - 1), sum(gens.degrees[i] for i in idx))
    _, p, q, args = letter
    res = internal = 0
    for w in args:
        r, n = word_bidegree(gens, w)
        res += r
        internal += n
    return (res - (p + q - 1), internal)


def word_bidegree(gens, word):
    res = internal = 0
    for letter in word:
        r, n = letter_bidegree(gens, letter)
        res += r
        internal += n
    return (res, internal)


def word_total_degree(gens, word):
    r, n = word_bidegree(gens, word)
    return r + n


def letter_str(gens, letter):
    kind = letter[0]
    if kind == "v":
        return gens.names[letter[1]]
    if kind == "C":
        return "C(" + ",".join(gens.names[i] for i in letter[1]) + ")"
    _, p, q, args = letter
    def ws(w):
        return ".".join(letter_str(gens, l) for l in w)
    return (f"E{p}{q}(" + ",".join(ws(w) for w in args[:p]) + ";"
            + ",".join(ws(w) for w in args[p:]) + ")")


def word_str(gens, word):
    return ".".join(letter_str(gens, l) for l in word) if word else "1"


# ---------------------------------------------------------------------------
# element arithmetic

def zero():
    return {}


def add_into(out, word, coeff, ring):
    cur = ring.add(out.get(word, ring.zero()), coeff)
    if ring.is_zero(cur):
        out.pop(word, None)
    else:
        out[word] = cur
    return out


def add(x, y, ring):
    out = dict(x)
    for w, c in y.items():
        add_into(out, w, c, ring)
    return out


def scale(x, c, ring):
    if ring.is_zero(c):
        return {}
    return {w: ring.mul(v, c) for w, v in x.items()}


def mul(x, y, ring):
    out = {}
    for wx, cx in x.items():
        for wy, cy in y.items():
            add_into(out, wx + wy, ring.mul(cx, cy), ring)
    return out


# ---------------------------------------------------------------------------
# the differential

class Differential:
    """Differential of the resolution, with a per-letter cache."""

    def __init__(self, gens: GeneratorSet):
        self.gens = gens
        self.ring = gens.ring
        self._letter_cache = {}

    def of_letter(self, letter):
        cached = self._letter_cache.get(letter)
        if cached is None:
            kind = letter[0]
            if kind == "v":
                cached = {}
            elif kind == "C":
                cached = self._d_cup(letter)
            else:
                cached = self._d_e(letter)
            self._letter_cache[letter] = cached
        return cached

    def _sign(self, par):
        return self.ring.one() if par % 2 == 0 else self.ring.neg(
            self.ring.one())

    def _d_cup(self, letter):
        """Sum over unshuffles of the multiset into two nonempty parts,
        distinct part-multisets counted once."""
        ring = self.ring
        idx = letter[1]
        out = {}
        n = len(idx)
        seen = set()
        for size in range(1, n):
            for positions in itertools.combinations(range(n), size):
                left = tuple(idx[i] for i in positions)
                right = tuple(idx[i] for i in range(n)
                              if i not in positions)
                if (left, right) in seen:
                    continue
                seen.add((left, right))
                lw = (v_letter(left[0]),) if len(left) == 1 \
                    else (cup_letter(left),)
                rw = (v_letter(right[0]),) if len(right) == 1 \
                    else (cup_letter(right),)
                add_into(out, (e_letter((lw,), (rw,)),), ring.one(), ring)
        return out

    def _d_e(self, letter):
        ring = self.ring
        gens = self.gens
        _, p, q, args = letter
        largs, rargs = args[:p], args[p:]
        adeg = [word_total_degree(gens, w) - 1 for w in largs]
        bdeg = [word_total_degree(gens, w) - 1 for w in rargs]
        P = sum(adeg)
        out = {}

        # internal differentials of the arguments
        for i in range(p):
            da = self.of_element({largs[i]: ring.one()})
            if not da:
                continue
            sign = self._sign(sum(adeg[:i]))
            for w, c in da.items():
                new = make_E_word(largs[:i] + (w,) + largs[i + 1:], rargs)
                if new is not None:
                    add_into(out, new, ring.mul(sign, c), ring)
        for j in range(q):
            db = self.of_element({rargs[j]: ring.one()})
            if not db:
                continue
            sign = self._sign(P + sum(bdeg[:j]))
            for w, c in db.items():
                new = make_E_word(largs, rargs[:j] + (w,) + rargs[j + 1:])
                if new is not None:
                    add_into(out, new, ring.mul(sign, c), ring)

        # adjacent merges
        for i in range(p - 1):
            sign = self._sign(sum(adeg[:i + 1]))
            new = make_E_word(
                largs[:i] + (largs[i] + largs[i + 1],) + largs[i + 2:],
                rargs)
            if new is not None:
                add_into(out, new, sign, ring)
        for j in range(q - 1):
            sign = self._sign(P + sum(bdeg[:j + 1]))
            new = make_E_word(
                largs,
                rargs[:j] + (rargs[j] + rargs[j + 1],) + rargs[j + 2:])
            if new is not None:
                add_into(out, new, sign, ring)

        # quadratic splittings, extremes excluded
        for i in range(p + 1):
            for j in range(q + 1):
                if (i, j) in ((0, 0), (p, q)):
                    continue
                head = make_E_word(largs[:i], rargs[:j])
                if head is None:
                    continue
                tail = make_E_word(largs[i:], rargs[j:])
                if tail is None:
                    continue
                k_par = sum(bdeg[:j]) * sum(adeg[i:])
                d_par = sum(adeg[:i]) + sum(bdeg[:j])
                sign = ring.neg(self._sign(k_par + d_par))
                add_into(out, head + tail, sign, ring)
        return out

    def of_word(self, word):
        ring = self.ring
        gens = self.gens
        out = {}
        par = 0
        for i, letter in enumerate(word):
            dl = self.of_letter(letter)
            if dl:
                sign = self._sign(par)
                for w, c in dl.items():
                    add_into(out, word[:i] + w + word[i + 1:],
                             ring.mul(sign, c), ring)
            r, n = letter_bidegree(gens, letter)
            par += r + n
        return out

    def of_element(self, x):
        ring = self.ring
        out = {}
        for word, coeff in x.items():
            for w, c in self.of_word(word).items():
                add_into(out, w, ring.mul(coeff, c), ring)
        return out


# ---------------------------------------------------------------------------
# normal form for nested E expressions

def _letter_parity(letter):
    """Total-degree parity, computable without generator degrees when
    those are all even (always the case away from F2)."""
    if letter[0] in ("v", "C"):
        return 0
    _, p, q, args = letter
    return (sum(_word_parity(w) for w in args) + p + q + 1) % 2


def _word_parity(word):
    return sum(_letter_parity(l) for l in word) % 2


def _word_shift_parity(word):
    """Parity of the desuspended total degree of an argument word."""
    return (_word_parity(word) + 1) % 2


def _is_nonnormal(letter):
    """A letter E_{1,r}(w; ...) whose single left argument is a
    one-letter word carrying an E letter can be rewritten by the
    block-composition relation; everything else is normal."""
    if letter[0] != "E":
        return False
    _, p, q, args = letter
    return p == 1 and len(args[0]) == 1 and args[0][0][0] == "E"


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _relation_sum(side_left, aargs, bargs, cargs, skip_head=False):
    """One side of the block-composition relation, as an element.

    side_left: sum over splittings of (a; b) into blocks feeding an
    outer E_{blocks, r}(...; c); otherwise splittings of (b; c) feeding
    E_{k, blocks}(a; ...).  skip_head drops the single-block term (used
    when that term is the letter being rewritten).
    """
    out = {}
    if side_left:
        inner_l, inner_r, tail = aargs, bargs, cargs
    else:
        inner_l, inner_r, tail = bargs, cargs, aargs
    n_l, n_r = len(inner_l), len(inner_r)
    for nblocks in range(1, n_l + n_r + 1):
        for ks in _compositions(n_l, nblocks):
            for ls in _compositions(n_r, nblocks):
                if any(a + b == 0 for a, b in zip(ks, ls)):
                    continue
                if skip_head and nblocks == 1:
                    continue
                blocks = []
                ai = bi = 0
                dead = False
                for a, b in zip(ks, ls):
                    w = make_E_word(inner_l[ai:ai + a],
                                    inner_r[bi:bi + b])
                    ai += a
                    bi += b
                    if w is None:
                        dead = True
                        break
                    blocks.append(w)
                if dead:
                    continue
                if side_left:
                    new = make_E_word(tuple(blocks), tail)
                else:
                    new = make_E_word(tail, tuple(blocks))
                if new is not None:
                    out[new] = out.get(new, 0) ^ 1
    return {w: 1 for w, c in out.items() if c}


def rewrite_letter(letter, ring):
    """Rewrite one non-normal letter via the block-composition relation.

    Over F2 the relation is available for all shapes.  Over other rings
    only the cup-one composite E_{1,1}(E_{1,1}(a;b); c) is supported;
    its signs are pinned by the chain-map condition (and the generator
    degrees are forced even away from F2, so the Koszul factors below
    are constant)."""
    _, p, q, args = letter
    inner = args[0][0]
    _, k, l, inner_args = inner
    aargs, bargs = inner_args[:k], inner_args[k:]
    cargs = args[1:]
    if ring.char != 2:
        if (k, l) != (1, 1):
            raise RingError(
                "E-normal form away from F2 covers only cup-one composites")
        aw, bw = aargs[0], bargs[0]
        pa, pb = _word_shift_parity(aw), _word_shift_parity(bw)
        if pa == 0 or pb == 0:
            raise RingError(
                "E-normal form away from F2 needs odd-shifted inner "
                "arguments (both inner arguments of even total degree)")
        # signed law for E_{1,q}(E_{1,1}(a;b); c_1..c_q) with a, b of
        # even total degree; Koszul signs use shifted (desuspended)
        # degree parities
        pcs = [_word_shift_parity(w) for w in cargs]
        terms = []
        for i in range(1, q + 2):          # slot receiving the b-block
            sign = -1 if (pb * sum(pcs[:i - 1])) % 2 else 1
            for t in range(0, q - i + 2):  # c's absorbed into the block
                if t == 0:
                    block = bw
                else:
                    block = (e_letter((bw,), cargs[i - 1:i - 1 + t]),)
                new_rargs = cargs[:i - 1] + (block,) + cargs[i - 1 + t:]
                terms.append(((e_letter((aw,), new_rargs),), sign))
        terms.append(((e_letter((aw, bw), cargs),), -1))
        terms.append(((e_letter((bw, aw), cargs),), 1 if (pa * pb) % 2 else -1))
        out = {}
        for w, c in terms:
            out[w] = out.get(w, 0) + c
        return {w: c for w, c in out.items() if c != 0}
    rhs = _relation_sum(False, aargs, bargs, cargs)
    lhs_rest = _relation_sum(True, aargs, bargs, cargs, skip_head=True)
    out = dict(rhs)
    for w in lhs_rest:
        if w in out:
            out.pop(w)
        else:
            out[w] = 1
    return out


def _find_nonnormal(word):
    for i, letter in enumerate(word):
        if letter[0] == "E":
            if _is_nonnormal(letter):
                return i, None
            # arguments may hide non-normal letters
            _, p, q, args = letter
            for ai, w in enumerate(args):
                sub = _find_nonnormal(w)
                if sub is not None:
                    return i, (ai, sub)
    return None


def _rewrite_in_word(word, pos, ring):
    i, sub = pos
    letter = word[i]
    if sub is None:
        repl = rewrite_letter(letter, ring)
    else:
        ai, deeper = sub
        _, p, q, args = letter
        inner_elt = _rewrite_in_word(args[ai], deeper, ring)
        # rebuild: replace argument ai by each word of the inner element
        repl = {}
        for w, c in inner_elt.items():
            new_args = args[:ai] + (w,) + args[ai + 1:]
            nw = make_E_word(new_args[:p], new_args[p:])
            if nw is not None:
                repl[nw] = ring.add(repl.get(nw, 0), c)
        repl = {w: c for w, c in repl.items() if c != 0}
    out = {}
    for w, c in repl.items():
        nw = word[:i] + w + word[i + 1:]
        out[nw] = ring.add(out.get(nw, 0), c)
    return {w: c for w, c in out.items() if c != 0}


def normalize_element(x, ring, step_cap=NORMALIZE_STEP_CAP):
    """Rewrite until no word contains a non-normal letter; idempotent.
    Raises after step_cap rewrites, or when a shape with unpinned signs
    occurs away from F2."""
    if not x:
        return {}
    work = dict(x)
    steps = 0
    while True:
        target = None
        for w in sorted(work):
            pos = _find_nonnormal(w)
            if pos is not None:
                target = (w, pos)
                break
        if target is None:
            return work
        steps += 1
        if steps > step_cap:
            raise ResolutionError(
                f"normalization exceeded {step_cap} rewrites; "
                f"offending word: {target[0]!r}")
        w, pos = target
        coeff = work.pop(w)
        for nw, c in _rewrite_in_word(w, pos, ring).items():
            add_into(work, nw, ring.mul(coeff, c), ring)


# ---------------------------------------------------------------------------
# projection, quotient, perturbation, f_nu

def rho(gens: GeneratorSet, x) -> Polynomial:
    """Send degree-0 words to the corresponding product in H and kill
    every word containing a negative-degree letter."""
    out = Polynomial.zero(gens)
    for word, coeff in x.items():
        if any(l[0] != "v" for l in word):
            continue
        poly = Polynomial.one(gens).scale(coeff)
        for l in word:
            poly = poly * Polynomial.generator(gens, gens.names[l[1]])
        out = out + poly
    return out


def _letter_survives_nu(letter):
    if letter[0] == "C":
        idx = letter[1]
        return len(idx) == 2 and idx[0] == idx[1]
    if letter[0] == "E":
        return all(_word_survives_nu(w) for w in letter[3])
    return True


def _word_survives_nu(word):
    return all(_letter_survives_nu(l) for l in word)


def quotient_nu(x):
    """Project to the quotient by the ideal generated by cup clusters
    other than the diagonal pairs a u2 a."""
    return {w: c for w, c in x.items() if _word_survives_nu(w)}


def p1_lift(gens: GeneratorSet, sq1: Sq1Table, i):
    """Chosen degree-0 word lift of Sq1 of generator i: each monomial
    becomes the word of its letters in ascending declared order."""
    ring = gens.ring
    img = sq1.image_of(i)
    out = {}
    for mono, coeff in img.terms.items():
        word = []
        for g, e in enumerate(mono):
            word.extend([v_letter(g)] * e)
        add_into(out, tuple(word), coeff, ring)
    return out


class PerturbedDifferential:
    """d + h2 on the quotient resolution: h2 sends a diagonal cup pair
    to the chosen lift of Sq1 of its generator and vanishes on all other
    letters."""

    def __init__(self, gens: GeneratorSet, sq1: Sq1Table):
        if gens.ring.char != 2:
            raise RingError("the perturbation lives over F2")
        if sq1 is None:
            raise AlgebraError("perturbation requires a Sq1 table")
        self.gens = gens
        self.sq1 = sq1
        self.d = Differential(gens)

    def h2_of_letter(self, letter):
        if letter[0] == "C" and len(letter[1]) == 2 \
                and letter[1][0] == letter[1][1]:
            return p1_lift(self.gens, self.sq1, letter[1][0])
        return {}

    def of_element(self, x):
        ring = self.gens.ring
        out = self.d.of_element(quotient_nu(x))
        out = quotient_nu(out)
        for word, coeff in quotient_nu(x).items():
            for i, letter in enumerate(word):
                for w, c in self.h2_of_letter(letter).items():
                    add_into(out, word[:i] + w + word[i + 1:],
                             ring.mul(coeff, c), ring)
        return out


def f_nu(table: HirschOpTable, x) -> Polynomial:
    """Multiplicative map to H: degree-0 letters go through rho, E
    letters through the Sq operation of their shape, diagonal cup pairs
    to zero."""
    gens = table.gens
    ring = gens.ring
    out = Polynomial.zero(gens)
    for word, coeff in x.items():
        poly = Polynomial.one(gens).scale(coeff)
        for letter in word:
            poly = poly * _f_nu_letter(table, letter)
            if poly.is_zero():
                break
        out = out + poly
    return out


def _f_nu_letter(table, letter) -> Polynomial:
    gens = table.gens
    if letter[0] == "v":
        return Polynomial.generator(gens, gens.names[letter[1]])
    if letter[0] == "C":
        return Polynomial.zero(gens)
    _, p, q, args = letter
    images = [rho(gens, {w: gens.ring.one()}) for w in args]
    return table.eval(p, q, images[:p], images[p:])


# ---------------------------------------------------------------------------
# contraction homotopy

def _is_v0(letter):
    return letter[0] == "v"


def _is_cup(letter):
    return letter[0] == "C"


def _cup1_args(letter):
    """For a cup-one letter E_{1,1}(x; y) with one-letter word
    arguments, the pair of inner letters; otherwise None."""
    if letter[0] != "E":
        return None
    _, p, q, args = letter
    if (p, q) != (1, 1):
        return None
    if len(args[0]) != 1 or len(args[1]) != 1:
        return None
    return args[0][0], args[1][0]


def _iteration_flatten(letter):
    """Letters a_1, ..., a_n of a right-nested cup-one iteration with
    degree-0 or cup-cluster entries; None when the letter is not one."""
    pair = _cup1_args(letter)
    if pair is None:
        return None
    x, y = pair
    if not (_is_v0(x) or _is_cup(x)):
        return None
    if _is_v0(y) or _is_cup(y):
        return [x, y]
    rest = _iteration_flatten(y)
    if rest is None:
        return None
    return [x] + rest


def _is_e1(letter):
    return _iteration_flatten(letter) is not None


def _is_eo(letter):
    seq = _iteration_flatten(letter)
    if seq is None or any(not _is_v0(l) for l in seq):
        return False
    idx = [l[1] for l in seq]
    return all(a < b for a, b in zip(idx, idx[1:]))


def _leq_v_t(i, letter):
    """v <= t comparison of a generator index against a letter: direct
    for degree-0 letters, all-members for cup clusters; None when the
    pair is incomparable."""
    if _is_v0(letter):
        return i <= letter[1]
    if _is_cup(letter):
        members = letter[1]
        if all(i <= m for m in members):
            return True
        if all(i >= m for m in members):
            return False
        return None
    return None


def _eop_position(letter):
    """Index kappa (1-based) of the descending pair of an iteration whose
    entries start with a strictly ascending degree-0 prefix a_1 < ... <
    a_kappa >= a_{kappa+1}; None when the letter is not of that shape."""
    seq = _iteration_flatten(letter)
    if seq is None or len(seq) < 2:
        return None
    kappa = 1
    while (kappa < len(seq) and _is_v0(seq[kappa - 1]) and _is_v0(seq[kappa])
           and seq[kappa - 1][1] < seq[kappa][1]):
        kappa += 1
    if kappa >= len(seq) or not _is_v0(seq[kappa - 1]):
        return None
    nxt = seq[kappa]
    if _is_v0(nxt):
        return kappa if seq[kappa - 1][1] >= nxt[1] else None
    if _is_cup(nxt) and all(seq[kappa - 1][1] >= m for m in nxt[1]):
        return kappa
    return None


def _is_eop(letter):
    return _eop_position(letter) is not None


def _is_w(letter):
    return _is_v0(letter) or _is_cup(letter) or _is_e1(letter)


def _cup_merge(i, letter):
    """a u2 x for a degree-0 letter index i and x a degree-0 or cup
    letter: clusters absorb the new entry."""
    if _is_v0(letter):
        return cup_letter((i, letter[1]))
    return cup_letter((i,) + letter[1])


def _tilde(letter):
    """Replace the descending pair of an E^op iteration by the cup-two
    of its entries, keeping the rest of the iteration right-nested."""
    seq = _iteration_flatten(letter)
    kappa = _eop_position(letter)
    merged = _cup_merge(seq[kappa - 1][1], seq[kappa])
    entries = seq[:kappa - 1] + [merged] + seq[kappa + 1:]
    rebuilt = entries[-1]
    for l in reversed(entries[:-1]):
        rebuilt = e_letter(((l,),), ((rebuilt,),))
    return rebuilt


def _edot_info(letter):
    """For letters in the splittable class: the path of argument indices
    from this letter down to the operation holding the first multi-letter
    string, together with that string's slot; None when no argument
    string anywhere in the nest has more than one letter, or the shape
    rules forbid the split."""
    if letter[0] != "E":
        return None
    _, p, q, args = letter
    for k, w in enumerate(args):
        if len(w) > 1:
            # first multi-letter string: it may occupy the leading left
            # slot, or the leading right slot of an E_{1,q} whose left
            # argument is a single plain letter
            if k == 0:
                return ((), 0)
            if p == 1 and k == 1 and len(args[0]) == 1 and _is_w(args[0][0]):
                return ((), 1)
            return None
        x = w[0]
        if _is_w(x):
            continue
        if x[0] == "E":
            sub = _edot_info(x)
            if sub is not None:
                path, slot = sub
                return ((k,) + path, slot)
            # a nested operation with only one-letter strings: scan on
            continue
        return None
    return None


def _is_edot(letter):
    return _edot_info(letter) is not None


def _split_slot(letter, slot):
    _, p, q, args = letter
    w = args[slot]
    x, y = (w[0],), w[1:]
    if slot == 0:
        return e_letter((x, y) + args[1:p], args[p:])
    return e_letter((args[0],), (x, y) + args[p + 1:])


def _prime(letter):
    """Split the first multi-letter argument string in the nest,
    promoting its leading letter to a new slot of its operation."""
    path, slot = _edot_info(letter)

    def rebuild(cur, depth):
        if depth == len(path):
            return _split_slot(cur, slot)
        _, p, q, args = cur
        k = path[depth]
        inner = rebuild(args[k][0], depth + 1)
        new_args = args[:k] + ((inner,),) + args[k + 1:]
        return e_letter(new_args[:p], new_args[p:])

    return rebuild(letter, 0)


def _case1(gens, word):
    """Adjacent cup-one insertion at the first ascent of a weakly
    descending degree-0 prefix."""
    n = len(word)
    k = None
    for pos in range(1, n):
        prev, cur = word[pos - 1], word[pos]
        if not _is_v0(prev):
            return None
        if _is_v0(cur):
            if prev[1] < cur[1]:
                k = pos
                break
            continue
        if _is_eo(cur):
            seq = _iteration_flatten(cur)
            if all(prev[1] < l[1] for l in seq):
                k = pos
                break
        return None
    if k is None:
        return None
    for l in word[k + 1:]:
        # cup clusters are excluded alongside E^op iterations: the
        # differential of a cluster regenerates an E^op letter, whose
        # word would give a second preimage of the same insertion
        if not _is_w(l) or _is_eop(l) or _is_cup(l):
            return None
    new_letter = e_letter(((word[k - 1],),), ((word[k],),))
    return word[:k - 1] + (new_letter,) + word[k + 1:]


def _case2(gens, word):
    for k, letter in enumerate(word):
        if _is_eop(letter):
            if any(not _is_w(l) or _is_eop(l) for l in word[:k]):
                return None
            if any(not _is_w(l) for l in word[k + 1:]):
                return None
            return word[:k] + (_tilde(letter),) + word[k + 1:]
        if not _is_w(letter):
            return None
    return None


def _case3(gens, word):
    for k, letter in enumerate(word):
        if _is_edot(letter):
            if any(not _is_w(l) for l in word[:k]):
                return None
            return word[:k] + (_prime(letter),) + word[k + 1:]
        if not _is_w(letter) and letter[0] == "E":
            # an E letter that is neither a plain iteration nor
            # splittable blocks this case
            if not _is_e1(letter):
                return None
    return None


_differential_cache = {}


def _differential_for(gens):
    d = _differential_cache.get(gens)
    if d is None:
        d = _differential_cache[gens] = Differential(gens)
    return d


def contraction_s(gens: GeneratorSet, word):
    """Degree (-1, 0) homotopy on a single word; exactly one case may
    apply, otherwise the value is zero.

    The result is scaled so that the original word occurs in the
    differential of the result with coefficient one (the defining
    property that s inverts one summand of d exactly)."""
    results = []
    for tag, fn in (("pair", _case1), ("cup", _case2), ("split", _case3)):
        got = fn(gens, word)
        if got is not None:
            results.append((tag, got))
    if len(results) > 1:
        raise ResolutionError(
            f"contraction cases {[t for t, _ in results]} both match "
            f"word {word_str(gens, word)}")
    if not results:
        return {}
    ring = gens.ring
    out_word = results[0][1]
    if ring.char == 2:
        return {out_word: ring.one()}
    image = normalize_element(
        _differential_for(gens).of_element({out_word: ring.one()}), ring)
    coeff = image.get(word, 0)
    if coeff == 0:
        raise ResolutionError(
            f"contraction image of {word_str(gens, word)} does not hit the "
            "word back under the differential")
    return {out_word: ring.inv(coeff)}


def contraction_element(gens, x):
    ring = gens.ring
    out = {}
    for word, coeff in x.items():
        for w, c in contraction_s(gens, word).items():
            add_into(out, w, ring.mul(coeff, c), ring)
    return out


def verify_siteration(gens: GeneratorSet, x, iteration_cap=8,
                      differential=None):
    """Smallest n with (sd + ds - Id)^n = 0 on x, or a failure report
    carrying the residual."""
    ring = gens.ring
    d = differential or Differential(gens)

    def T(y):
        sd = contraction_element(gens, d.of_element(y))
        ds = d.of_element(contraction_element(gens, y))
        out = add(sd, ds, ring)
        return add(out, scale(y, ring.neg(ring.one()), ring), ring)

    cur = dict(x)
    for n in range(1, iteration_cap + 1):
        cur = T(cur)
        cur = normalize_element(cur, ring)
        if not cur:
            return n
    return {"failed": True, "cap": iteration_cap, "residual": cur}


# ---------------------------------------------------------------------------
# basis enumeration

def enumerate_rh_letters(gens: GeneratorSet, r_min=-3, n_max=12):
    """All normal-form letters with resolution degree >= r_min and
    internal degree <= n_max, grouped by resolution degree."""
    if r_min > 0:
        raise ResolutionError("r_min must be <= 0")
    letters = {0: [v_letter(i) for i in range(len(gens.names))
                   if gens.degrees[i] <= n_max]}

    def words_with(res_target, internal_cap):
        """All nonempty words of already-built letters with the given
        total resolution degree and internal degree <= internal_cap."""
        pool = []
        for r in range(0, res_target - 1, -1):
            for l in letters.get(r, []):
                pool.append((r, letter_bidegree(gens, l)[1], l))
        out = []

        def build(prefix, res_left, cap_left):
            if prefix and res_left == 0:
                out.append(tuple(prefix))
            for r, n, l in pool:
                if res_left - r < 0 or n > cap_left:
                    continue
                prefix.append(l)
                build(prefix, res_left - r, cap_left - n)
                prefix.pop()

        build([], res_target, internal_cap)
        return out

    for target in range(-1, r_min - 1, -1):
        found = []
        # cup clusters
        if target % 2 == 0:
            size = -target // 2 + 1
            for combo in itertools.combinations_with_replacement(
                    range(len(gens.names)), size):
                if sum(gens.degrees[i] for i in combo) <= n_max:
                    found.append(cup_letter(combo))
        # E letters over all shapes and argument degree distributions
        max_arity = -target + 1
        for p in range(1, max_arity):
            for q in range(1, max_arity - p + 1):
                args_res_total = target + (p + q - 1)
                if args_res_total > 0:
                    continue
                for dist in _compositions(-args_res_total, p + q):
                    arg_lists = []
                    dead = False
                    for res in dist:
                        ws = words_with(-res, n_max)
                        if not ws:
                            dead = True
                            break
                        arg_lists.append(ws)
                    if dead:
                        continue
                    for combo in itertools.product(*arg_lists):
                        internal = sum(word_bidegree(gens, w)[1]
                                       for w in combo)
                        if internal > n_max:
                            continue
                        letter = e_letter(combo[:p], combo[p:])
                        if _is_nonnormal(letter):
                            continue
                        found.append(letter)
        letters[target] = found
    return letters


def enumerate_rh_basis(gens: GeneratorSet, r_min=-3, n_max=12):
    """Per-bidegree monomial basis of the truncated resolution: dict
    (res, internal) -> list of words."""
    letters = enumerate_rh_letters(gens, r_min, n_max)
    pool = []
    for r in sorted(letters, reverse=True):
        for l in letters[r]:
            _, n = letter_bidegree(gens, l)
            pool.append((r, n, l))
    basis = {}

    def build(prefix, res, internal):
        if prefix:
            basis.setdefault((res, internal), []).append(tuple(prefix))
        for r, n, l in pool:
            if res + r < r_min or internal + n > n_max:
                continue
            prefix.append(l)
            build(prefix, res + r, internal + n)
            prefix.pop()

    build([], 0, 0)
    return basis


# ---------------------------------------------------------------------------
# hexagon check

def check_hexagon(gens: GeneratorSet, i, j, k):
    """Compare the differentials of the two sides of the cubic relation
    on three degree-0 generators; raw comparison first, normalized (over
    F2) as a fallback."""
    ring = gens.ring
    one = ring.one()
    a, b, c = ((v_letter(t),) for t in (i, j, k))
    d = Differential(gens)

    def elt(word, coeff=None):
        return {word: coeff if coeff is not None else one}

    lhs = {}
    lhs = add(lhs, elt((e_letter((a,), (b, c)),)), ring)
    lhs = add(lhs, scale(elt((e_letter((a,), (c, b)),)),
                         ring.neg(one), ring), ring)
    lhs = add(lhs, elt((e_letter((a,), ((e_letter((b,), (c,)),),)),)),
              ring)
    rhs = {}
    rhs = add(rhs, elt((e_letter(((e_letter((a,), (b,)),),), (c,)),)),
              ring)
    rhs = add(rhs, elt((e_letter((a, b), (c,)),)), ring)
    rhs = add(rhs, scale(elt((e_letter((b, a), (c,)),)),
                         ring.neg(one), ring), ring)
    dl, dr = d.of_element(lhs), d.of_element(rhs)
    if dl == dr:
        return True
    if ring.char == 2:
        return normalize_element(dl, ring) == normalize_element(dr, ring)
    diff = add(dl, scale(dr, ring.neg(one), ring), ring)
    return not diff
