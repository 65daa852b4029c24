"""Decision tree as a rich Tree of questions."""
from typing import Sequence

from rich.tree import Tree

from .model import TrainedModel
from .tree import TreeNode


def _label(node: TreeNode, class_names) -> str:
    neg, pos = node.counts
    text = (f"{class_names[0]}={neg} {class_names[1]}={pos} "
            f"entropy={node.entropy:.3f}")
    if node.is_leaf:
        winner = class_names[1] if node.proba >= 0.5 else class_names[0]
        style = "bold green" if node.entropy == 0.0 else "yellow"
        return f"[{style}]{winner}[/] ({text})"
    return text


def _attach(branch: Tree, node: TreeNode, names, class_names):
    if node.is_leaf:
        return
    name = names[node.feature]
    yes = branch.add(f"[cyan]{name} <= {node.threshold:.4g}[/] -> {_label(node.left, class_names)}")
    _attach(yes, node.left, names, class_names)
    no = branch.add(f"[magenta]{name} > {node.threshold:.4g}[/] -> {_label(node.right, class_names)}")
    _attach(no, node.right, names, class_names)


def render_tree(model: TrainedModel, feature_names: Sequence[str] = None,
                class_names=("LSA", "HSA"), title: str = "decision tree") -> Tree:
    if model.variant != "tree":
        raise ValueError(f"render_tree needs a tree model, got {model.variant!r}")
    root = model.params["root"]
    names = list(feature_names or model.columns)
    tree = Tree(f"[bold]{title}[/] ({_label(root, class_names)})")
    _attach(tree, root, names, class_names)
    return tree
