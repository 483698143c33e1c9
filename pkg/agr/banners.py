"""Panels that frame each command's human-readable output."""

from typing import Optional

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.text import Text

console = Console()


def display_header(command: str, group: Optional[str] = None) -> None:
    """
    Display the title panel for a command.

    Args:
        command: Subcommand being run (e.g. "engel-pair")
        group: Name of the group it runs in, if any
    """
    subtitle = f"[dim]group: {group}[/dim]" if group else "[dim]automaton groups[/dim]"
    console.print()
    console.print(Panel.fit(
        f"[bold cyan]agr {command}[/bold cyan]\n{subtitle}",
        border_style="cyan",
        box=box.ROUNDED,
    ))


def display_step_separator(step_name: str, step_number: Optional[int] = None) -> None:
    """Display a separator for one phase of a longer run."""
    label = f"STEP {step_number}: {step_name}" if step_number is not None else step_name
    console.print()
    console.print(Panel.fit(
        Text(label, style="bold cyan", justify="center"),
        border_style="cyan",
        box=box.ROUNDED,
    ))


def display_completion_banner(success: bool = True, message: Optional[str] = None) -> None:
    """
    Display the closing panel.

    Args:
        success: True when the command decided or verified what it was asked,
            False when it ran out of budget or could not certify
        message: Outcome to show in the panel
    """
    if success:
        symbol, style, title = "✓", "green", "[green]✓ Decided[/green]"
        message = message or "Completed"
    else:
        symbol, style, title = "?", "yellow", "[yellow]? Not decided[/yellow]"
        message = message or "Budget exhausted or not certified"

    content = Text()
    content.append(f"  {symbol}  ", style=f"bold {style}")
    content.append(message, style=f"bold {style}")
    console.print()
    console.print(Panel.fit(content, border_style=style, box=box.ROUNDED, title=title))
    console.print()


def display_error(message: str) -> None:
    console.print(f"[bold red]✗ Error:[/bold red] {message}")
