"""
Feedforward surrogates and positive trainable scalars
"""
from neural.network import BoundNetwork, Network
from neural.scalars import TrainableScalar

__all__ = ["BoundNetwork", "Network", "TrainableScalar"]
