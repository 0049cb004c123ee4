import pytest

import synthdata
from nneten import NetworkConfig
from nneten.sweep import prepare_vectors


@pytest.fixture(scope="session")
def full_dataset():
    """Full-size synthetic dataset: 60000 train / 10000 test images."""
    return synthdata.make_dataset()


@pytest.fixture(scope="session")
def full_vectors(full_dataset):
    """Vectorized full dataset, shared by every entropy computation."""
    return prepare_vectors(full_dataset, NetworkConfig())


@pytest.fixture(scope="session")
def small_dataset():
    """Reduced dataset (2000/500) for fast unit-level training runs."""
    return synthdata.make_dataset(2000, 500)


@pytest.fixture(scope="session")
def small_vectors(small_dataset):
    return prepare_vectors(small_dataset, NetworkConfig())


@pytest.fixture(scope="session")
def small_dataset_dir(tmp_path_factory, small_dataset):
    """The small dataset written as canonical IDX files."""
    directory = tmp_path_factory.mktemp("idx")
    synthdata.write_dataset(directory, small_dataset)
    return directory
