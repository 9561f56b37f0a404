from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateError


def render_report(template_dir: str, template_name: str, **context) -> str:
    """
    Render a plain-text report from a Jinja2 template.

    Args:
        template_dir (str): Directory holding the `*.txt.j2` templates.
        template_name (str): Template file name, e.g. `branches.txt.j2`.
        **context: Variables exposed to the template.

    Returns:
        str: The rendered text.

    Raises:
        Exception: If the template is missing or fails to render.

    Example:
        >>> text = render_report("templates", "syndrome_table.txt.j2", t2=1.0, t3=2.0, rows=[])
        >>> text.splitlines()[0]
        '# Syndrome sign table (thresholds: mode 2 1, mode 3 2)'
    """
    try:
        env = Environment(
            loader=FileSystemLoader(template_dir),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        return env.get_template(template_name).render(**context)
    except TemplateError as e:
        raise Exception(f"Failed to render template '{template_name}': {e}") from e
