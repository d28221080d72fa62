"""Counter nonces that survive restarts, and replay checks at the receiver."""

import tempfile

from grain_ple.keys import KeyMaterial
from grain_ple.session import SessionStore, accept_frame, issue_nonce

key = KeyMaterial.from_hex("33" * 16)

with tempfile.TemporaryDirectory() as tmp:
    store = SessionStore(tmp)

    # sender: every nonce is persisted before it is handed out
    rec = store.open(key.key_id)
    for _ in range(3):
        nonce, rec = issue_nonce(rec, store)
        print("issued", nonce.hex())

    # "reboot": the counter continues where it left off
    rec = SessionStore(tmp).open(key.key_id)
    nonce, rec = issue_nonce(rec, store)
    print("after restart", nonce.counter)

    # receiver: the frame counter is the nonce; reordering is fine, replays are not
    rx = store.open("receiver-" + key.key_id)
    for counter in (0, 2, 1, 2, 3):
        decision, rx = accept_frame(rx, counter)
        print(f"frame {counter}: {decision.reason}")
