from treelib import Tree
from utils import agent_print
from colorama import Fore

from multipoly import default_variables


def _point(v):
    return "(" + ", ".join(str(c) for c in v) + ")"


def create_face_tree(K):
    """Faces of K grouped by dimension; each face lists its defining facets."""
    agent_print("Tree Builder", "Creating face lattice tree...", Fore.MAGENTA)
    names = default_variables(K.dimension)

    face_tree = Tree()
    face_tree.create_node(f"K ({len(K.vertices)} vertices, {K.num_facets} facets)", "polytope")

    for face in K.faces():
        dim_id = f"dim_{face.dimension}"
        if not face_tree.contains(dim_id):
            face_tree.create_node(f"dimension {face.dimension}", dim_id, parent="polytope")

        face_id = "face_" + "_".join(str(j) for j in sorted(face.vertex_indices))
        forms = ", ".join(K.facet_forms[i].format(names) for i in sorted(face.facets))
        if face.dimension == 0:
            label = f"vertex {_point(face.vertices[0])} on {forms}"
        else:
            label = f"{len(face.vertices)} vertices, centre {_point(face.interior_point)} on {forms}"
        face_tree.create_node(label, face_id, parent=dim_id)

    agent_print("Tree Builder", "Face lattice tree created!", Fore.MAGENTA)
    return face_tree


def create_gallery_tree(results):
    gallery_tree = Tree()
    gallery_tree.create_node("Gallery", "gallery")

    for result in results:
        mark = "ok" if result.passed else "MISMATCH"
        gallery_tree.create_node(f"{result.name} [{mark}]", result.name, parent="gallery")
        for k, outcome in enumerate(result.outcomes):
            text = f"{'ok' if outcome.ok else 'FAIL'}: {outcome.label}"
            if not outcome.ok:
                text += f" (expected {outcome.expected}, got {outcome.actual})"
            gallery_tree.create_node(text, f"{result.name}_{k}", parent=result.name)

    return gallery_tree
