"""Shared builders for the test suite.

Newick fragments are assembled textually; every helper returns a parsed
tree so tests stay independent of construction internals.
"""

from mastkit import deroot, parse_newick


def left_deep(labels):
    """Caterpillar nested on the left: (((a,b),c),d)."""
    text = labels[0]
    for label in labels[1:]:
        text = f"({text},{label})"
    return text


def right_deep(labels):
    """Caterpillar nested on the right: (a,(b,(c,d)))."""
    text = labels[-1]
    for label in reversed(labels[:-1]):
        text = f"({label},{text})"
    return text


def left_comb(parts):
    """Nest already-built subtree strings on the left."""
    text = parts[0]
    for part in parts[1:]:
        text = f"({text},{part})"
    return text


def right_comb(parts):
    """Nest already-built subtree strings on the right."""
    text = parts[-1]
    for part in reversed(parts[:-1]):
        text = f"({part},{text})"
    return text


def rooted(text):
    return parse_newick(text, rooted=True)


def unrooted(text):
    return parse_newick(text, rooted=False)


def block_comb_pair(total, block_size, sentinel="1", start=2):
    """An unrooted pair built from one chain of small aligned blocks.

    Tree one hangs the blocks off a left comb, tree two off a right comb,
    and both carry a sentinel leaf so canonical rooting lands on it.  The
    blocks read in the same label order in both trees.
    """
    labels = [str(i) for i in range(start, start + total)]
    blocks = [labels[i:i + block_size] for i in range(0, total, block_size)]
    one = rooted(f"({sentinel},{left_comb([left_deep(b) for b in blocks])});")
    two = rooted(f"({sentinel},{right_comb([left_deep(b) for b in blocks])});")
    return deroot(one), deroot(two)
