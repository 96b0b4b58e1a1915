import numpy as np
import pytest

from apvdsteg import codec, metrics
from apvdsteg.core import HEADER_BITS, TYPE_RAW, Bitstream, ImageBuffer, StegoKey, encode_header, frame_payload
from apvdsteg.errors import CapacityExceeded, InvalidHeader, Truncated
from apvdsteg.pipeline import (
    EmbedMode,
    Slot,
    capacity,
    embed,
    enumerate_slots,
    estimate_capacity,
    extract,
    lsb_embed,
    lsb_extract,
    slot_capacities,
)

from conftest import natural, random_image, smooth_image


def framed_bits(rng, payload_bits):
    body = Bitstream(rng.integers(0, 2, size=payload_bits, dtype=np.uint8))
    return encode_header(TYPE_RAW, payload_bits).extend(body)


def test_enumerate_slots():
    slots = enumerate_slots(ImageBuffer.blank(4, 4))
    assert len(slots) == 8 and slots[0] == Slot(0, 0, 0) and slots[1] == Slot(0, 0, 1)
    assert len(enumerate_slots(ImageBuffer.blank(5, 2))) == 4
    assert len(enumerate_slots(ImageBuffer.blank(4, 4, channels=3))) == 24
    assert enumerate_slots(ImageBuffer.blank(4, 4, channels=3))[8] == Slot(1, 0, 0)


def test_estimate_capacity_examples():
    assert estimate_capacity(ImageBuffer.blank(512, 512, value=128)) == 393_216
    edge = ImageBuffer.from_array(np.array([[254, 255], [255, 254]], dtype=np.uint8))
    assert estimate_capacity(edge) == 0
    assert estimate_capacity(ImageBuffer(np.zeros((1, 0, 0), dtype=np.uint8))) == 0


def test_capacity_is_seed_independent_sum_of_pair_capacities(rng):
    img = random_image(rng, 33, 17, 3)
    first = img.samples[:, :, 0:32:2].ravel()
    second = img.samples[:, :, 1:32:2].ravel()
    expected = sum(codec.capacity_bits(codec.PixelPair(int(a), int(b))) for a, b in zip(first, second))
    assert estimate_capacity(img) == expected == int(slot_capacities(img).sum())


def test_header_only_payload_touches_few_slots(rng):
    cover = ImageBuffer.blank(64, 64, value=128)
    stego = embed(cover, frame_payload(b""), StegoKey(3))
    changed_pairs = np.any(
        (cover.samples.reshape(-1, 2) != stego.samples.reshape(-1, 2)), axis=1
    ).sum()
    # every slot carries 3 bits here, so 64 header bits need 22 slots
    assert 0 < changed_pairs <= 22


def test_capacity_boundary(rng):
    cover = smooth_image(rng, 96, 64)
    total = estimate_capacity(cover)
    embed(cover, framed_bits(rng, total - HEADER_BITS), StegoKey(1))
    with pytest.raises(CapacityExceeded) as info:
        embed(cover, framed_bits(rng, total - HEADER_BITS + 1), StegoKey(1))
    assert info.value.needed == total + 1 and info.value.available == total


@pytest.mark.parametrize("mode", list(EmbedMode))
@pytest.mark.parametrize("channels", [1, 3])
def test_round_trip_all_modes(rng, mode, channels):
    for trial in range(8):
        w, h = rng.integers(8, 80, size=2)
        cover = (random_image if trial % 2 else smooth_image)(rng, int(w), int(h), channels)
        k_lsb = int(rng.integers(1, 5))
        total = capacity(cover, mode, k_lsb=k_lsb)
        n = int(rng.integers(0, total - HEADER_BITS + 1))
        payload = framed_bits(rng, n)
        seed = int(rng.integers(0, 2**63))
        stego = embed(cover, payload, seed, mode=mode, k_lsb=k_lsb)
        assert stego.samples.shape == cover.samples.shape
        assert extract(stego, seed, mode=mode, k_lsb=k_lsb) == payload


def test_round_trip_image_payload_natural_cover():
    cover = natural("camera", 256)
    secret = natural("coins", 64)
    stego = embed(cover, frame_payload(secret), StegoKey(99))
    from apvdsteg.core import parse_payload

    assert parse_payload(extract(stego, StegoKey(99))) == secret


def test_unpaired_column_is_untouched(rng):
    cover = random_image(rng, 31, 20, 3)
    stego = embed(cover, framed_bits(rng, estimate_capacity(cover) - HEADER_BITS), StegoKey(5))
    assert np.array_equal(stego.samples[:, :, 30], cover.samples[:, :, 30])


@pytest.mark.parametrize("channels", [1, 3])
def test_perturbation_bound_apvd(rng, channels):
    cover = random_image(rng, 64, 48, channels)
    stego = embed(cover, framed_bits(rng, estimate_capacity(cover) - HEADER_BITS), StegoKey(8))
    a = cover.samples[:, :, 0::2].astype(int)
    b = cover.samples[:, :, 1::2].astype(int)
    d = np.abs(b - a)
    bound = (DEFAULT_SPAN[d] + 1) // 2
    assert np.all(np.abs(stego.samples[:, :, 0::2].astype(int) - a) <= bound)
    assert np.all(np.abs(stego.samples[:, :, 1::2].astype(int) - b) <= bound)


DEFAULT_SPAN = codec.DEFAULT_TABLE.upper_of - codec.DEFAULT_TABLE.lower_of


@pytest.mark.parametrize("k_lsb", [1, 2, 3, 4])
def test_perturbation_bound_lsb(rng, k_lsb):
    cover = random_image(rng, 40, 30, 3)
    payload = framed_bits(rng, capacity(cover, "lsb", k_lsb=k_lsb) - HEADER_BITS)
    stego = lsb_embed(cover, payload, StegoKey(2), k_lsb)
    diff = np.abs(stego.samples.astype(int) - cover.samples.astype(int))
    assert diff.max() <= 2**k_lsb - 1
    assert lsb_extract(stego, StegoKey(2), k_lsb) == payload


def test_channel_independence():
    # channels 0 and 2 hold only unusable (254, 255) pairs, so every payload bit lands in channel 1
    planes = np.empty((3, 16, 16), dtype=np.uint8)
    planes[[0, 2], :, 0::2] = 254
    planes[[0, 2], :, 1::2] = 255
    planes[1] = 100
    cover = ImageBuffer(planes)
    assert estimate_capacity(cover) == 128 * 3
    payload = framed_bits(np.random.default_rng(0), 200)
    stego = embed(cover, payload, StegoKey(11))
    assert np.array_equal(stego.samples[[0, 2]], cover.samples[[0, 2]])
    assert not np.array_equal(stego.samples[1], cover.samples[1])
    assert extract(stego, StegoKey(11)) == payload


def test_wrong_seed_and_pristine_cover_rejected(rng):
    cover = natural("camera", 128)
    payload = framed_bits(rng, 4000)
    stego = embed(cover, payload, StegoKey(1234))
    rejected = 0
    for seed in range(300):
        try:
            extract(stego, StegoKey(10_000 + seed))
        except InvalidHeader:
            rejected += 1
    assert rejected >= 299
    with pytest.raises(InvalidHeader):
        extract(cover, StegoKey(1234))


def test_mode_mismatch_is_detected(rng):
    cover = natural("moon", 128)
    payload = framed_bits(rng, 500)
    stego = embed(cover, payload, StegoKey(77), mode="apvd-prng")
    with pytest.raises(InvalidHeader):
        extract(stego, StegoKey(77), mode="apvd-seq")
    with pytest.raises(InvalidHeader):
        extract(stego, StegoKey(77), table=codec.get_table("fine"))


def test_seq_mode_fills_raster_order_prefix(rng):
    cover = smooth_image(rng, 64, 64)
    stego = embed(cover, framed_bits(rng, 300), StegoKey(0), mode="apvd-seq")
    changed_rows = np.flatnonzero(np.any(cover.samples[0] != stego.samples[0], axis=1))
    assert changed_rows.max() < 8


def test_truncated_declared_length(rng):
    cover = smooth_image(rng, 32, 32)
    total = estimate_capacity(cover)
    # header claims more payload than the image can hold
    header = encode_header(TYPE_RAW, total)
    stego = embed(cover, header, StegoKey(6))
    with pytest.raises(Truncated):
        extract(stego, StegoKey(6))


def test_lsb_capacity_and_full_capacity_psnr():
    rng = np.random.default_rng(0)
    cover = ImageBuffer(rng.integers(0, 256, size=(1, 512, 512), dtype=np.uint8))
    assert capacity(cover, "lsb", k_lsb=1) == 262_144
    payload = framed_bits(rng, 262_144 - HEADER_BITS)
    stego = embed(cover, payload, StegoKey(3), mode="lsb")
    # a uniform random bit replaces each LSB; half of them change by 1, so MSE ~ 0.5
    assert metrics.psnr(cover, stego) == pytest.approx(51.14, abs=0.05)
    assert extract(stego, StegoKey(3), mode="lsb") == payload


def test_lsb_rejects_bad_k():
    with pytest.raises(ValueError):
        capacity(ImageBuffer.blank(4, 4), "lsb", k_lsb=5)


def test_embedding_is_deterministic(rng):
    cover = random_image(rng, 50, 50, 3)
    payload = framed_bits(rng, 2000)
    assert embed(cover, payload, StegoKey(5)) == embed(cover, payload, StegoKey(5))
    assert embed(cover, payload, StegoKey(5)) != embed(cover, payload, StegoKey(6))
