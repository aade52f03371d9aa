"""Frozen expected values for the running example over {x, y, z}."""
from iterrev.preorder import ChangeOp, ChangeSequence

from conftest import XYZ, F

RUNNING = ChangeSequence(XYZ, [
    ChangeOp("lex", F("y")),
    ChangeOp("nat", F("!x")),
    ChangeOp("res", F("x & z")),
    ChangeOp("rad", F("!z")),
])

# class labels after each step (empty classes removed); rad(!z) pushes every
# model of z to the last class
CLASS_TABLE = [
    ["T"],
    ["y", "!y"],
    ["!x & y", "x & y", "!y"],
    ["x & y & z", "!x & y", "x & y & !z", "!y & x & z", "!y & (!x | !z)"],
    ["!x & y & !z", "x & y & !z", "!y & !z", "z"],
]

FINAL_BASE = "!x & y & !z"

CORE = [("lex", "y"), ("lex", "!x & y"), ("refi", "x & z"), ("lex", "x & y & z"),
        ("lex", "z"), ("sev", "!z"), ("lex", "!z")]

UNDER_ARGS = ("!z", ["z", "x & y & z", "!x & y", "y", "x & z"])
UNDER_VALUE = "z | !x & y"
