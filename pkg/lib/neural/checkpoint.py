import numpy as np

from lib.neural.dense_net import Activation, DenseLayer, DenseNet

NET_FORMAT = "hetsched.dense_net"
NET_FORMAT_VERSION = 1


def net_to_dict(net: DenseNet) -> dict:
    """Layer shapes plus row-major parameters. Floats survive JSON bit-exactly."""
    return {
        "format": NET_FORMAT,
        "version": NET_FORMAT_VERSION,
        "seed": net.seed,
        "layers": [
            {
                "in": layer.in_features,
                "out": layer.out_features,
                "activation": layer.activation.value,
                "weights": layer.weights.ravel().tolist(),
                "biases": layer.biases.tolist(),
            }
            for layer in net.layers
        ],
    }


def net_from_dict(dictionary: dict) -> DenseNet:
    """Deserialize from dict."""
    if dictionary.get("format") != NET_FORMAT:
        raise ValueError(f"Error: Not a network checkpoint (format '{dictionary.get('format')}')")
    if dictionary.get("version") != NET_FORMAT_VERSION:
        raise ValueError(f"Error: Unsupported network checkpoint version {dictionary.get('version')}")

    try:
        layers = [
            DenseLayer(
                weights=np.array(entry["weights"], dtype=np.float64).reshape(entry["out"], entry["in"]),
                biases=np.array(entry["biases"], dtype=np.float64),
                activation=Activation(entry["activation"]),
            )
            for entry in dictionary["layers"]
        ]
    except KeyError as e:
        raise ValueError(f"Error: Missing key in network checkpoint: {e}")

    return DenseNet(layers, seed=dictionary.get("seed"))
