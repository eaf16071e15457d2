from hypothesis import given
from hypothesis import strategies as st

from gamechain import tx
from gamechain.gas import DEFAULT_SCHEDULE, charge_gas
from gamechain.state import Account, LedgerState

ADDR_A = bytes([1] * 32)
ADDR_B = bytes([2] * 32)


def state_with(*addresses):
    state = LedgerState()
    for addr in addresses:
        state.accounts[addr] = Account(balance=1)
    return state


def test_create_asset_known_value():
    payload = tx.CreateAsset(name="sword", category="weapon", rarity=0)
    assert charge_gas(DEFAULT_SCHEDULE, payload, LedgerState()) == 51_100


def test_create_asset_charges_per_utf8_byte():
    one = tx.CreateAsset(name="a", category="b", rarity=0)
    assert charge_gas(DEFAULT_SCHEDULE, one, LedgerState()) == 50_200
    # Multibyte characters are charged by encoded length, not code points.
    wide = tx.CreateAsset(name="⚔", category="b", rarity=0)
    assert charge_gas(DEFAULT_SCHEDULE, wide, LedgerState()) == 50_400


@given(
    st.text(min_size=1, max_size=100),
    st.text(min_size=1, max_size=50),
)
def test_create_asset_band_over_full_length_range(name, category):
    # Clamp to byte budgets the executor enforces; gas must stay in band
    # for every payload the executor would accept.
    name = name.encode()[:100].decode(errors="ignore") or "x"
    category = category.encode()[:50].decode(errors="ignore") or "x"
    payload = tx.CreateAsset(name=name, category=category, rarity=0)
    gas = charge_gas(DEFAULT_SCHEDULE, payload, LedgerState())
    assert 50_000 <= gas <= 70_000


def test_transfer_asset_existing_recipient():
    payload = tx.TransferAsset(asset_id=1, to=ADDR_B)
    assert charge_gas(DEFAULT_SCHEDULE, payload, state_with(ADDR_A, ADDR_B)) == 42_000


def test_transfer_asset_new_recipient_pays_surcharge():
    payload = tx.TransferAsset(asset_id=1, to=ADDR_B)
    assert charge_gas(DEFAULT_SCHEDULE, payload, state_with(ADDR_A)) == 50_000


def test_transfer_asset_band():
    for state in (state_with(ADDR_A), state_with(ADDR_A, ADDR_B)):
        gas = charge_gas(DEFAULT_SCHEDULE, tx.TransferAsset(asset_id=9, to=ADDR_B), state)
        assert 40_000 <= gas <= 60_000


def test_flat_costs():
    state = state_with(ADDR_A, ADDR_B)
    schedule = DEFAULT_SCHEDULE
    expectations = [
        (tx.NativeTransfer(to=ADDR_B, amount=1), schedule.native_transfer_base),
        (tx.CreateToken(symbol="GEM", supply=10), schedule.token_op_base),
        (tx.TokenTransfer(symbol="GEM", to=ADDR_B, amount=1), schedule.token_op_base),
        (tx.CreatePool("A", "B", 30, 10, 10), schedule.pool_op_base),
        (tx.AddLiquidity(1, 10, 10), schedule.pool_op_base),
        (tx.RemoveLiquidity(1, 10), schedule.pool_op_base),
        (tx.SwapExactIn(1, 0, 10, 0), schedule.swap_base),
        (tx.Stake(amount=10), schedule.stake_base),
        (tx.Unstake(), schedule.stake_base),
        (tx.SubmitReport(feed_id="F", value=1), schedule.report_base),
    ]
    for payload, expected in expectations:
        assert charge_gas(schedule, payload, state) == expected


def test_fee_is_gas_times_price():
    assert DEFAULT_SCHEDULE.gas_price == 1
