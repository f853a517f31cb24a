// Pattern: P13 NoSender
// Expected: Deadlock
//
// main receives from a channel that no goroutine sends to.
package main

import "fmt"

func main() {
	ch := make(chan int)
	fmt.Println(<-ch)
}
