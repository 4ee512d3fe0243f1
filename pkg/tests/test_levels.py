import pytest

from avatardm.errors import OutOfRange
from avatardm.levels import ControlMode, KnowledgeLevel, classify_level, select_mode


class TestClassifyLevel:
    @pytest.mark.parametrize(
        "ratio, level",
        [
            (0.10, KnowledgeLevel.EXPERT),
            (0.40, KnowledgeLevel.PROFESSIONAL),
            (0.60, KnowledgeLevel.AMATEUR),
            (0.90, KnowledgeLevel.NOVICE),
        ],
    )
    def test_band_fixtures(self, ratio, level):
        assert classify_level(ratio) is level

    @pytest.mark.parametrize(
        "ratio, level",
        [
            (0.0, KnowledgeLevel.EXPERT),
            (0.25, KnowledgeLevel.PROFESSIONAL),
            (0.50, KnowledgeLevel.AMATEUR),
            (0.75, KnowledgeLevel.NOVICE),
            (1.0, KnowledgeLevel.NOVICE),
        ],
    )
    def test_boundaries_belong_to_upper_band(self, ratio, level):
        assert classify_level(ratio) is level

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            classify_level(-0.01)
        with pytest.raises(OutOfRange):
            classify_level(1.01)

    def test_monotone_total_partition(self):
        previous = KnowledgeLevel.EXPERT
        for i in range(101):
            level = classify_level(i / 100)
            assert level >= previous
            previous = level


class TestSelectMode:
    def test_full_mapping(self):
        assert select_mode(KnowledgeLevel.EXPERT) is ControlMode.STRATEGIC
        assert select_mode(KnowledgeLevel.PROFESSIONAL) is ControlMode.TACTICAL
        assert select_mode(KnowledgeLevel.AMATEUR) is ControlMode.OPPORTUNISTIC
        assert select_mode(KnowledgeLevel.NOVICE) is ControlMode.SCRAMBLED

    def test_covers_all_modes_over_unit_interval(self):
        seen = {select_mode(classify_level(i / 100)) for i in range(101)}
        assert seen == set(ControlMode)

    def test_lowercase_labels(self):
        assert KnowledgeLevel.EXPERT.label == "expert"
        assert ControlMode.SCRAMBLED.label == "scrambled"
